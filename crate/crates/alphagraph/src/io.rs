//! Vector-file ingestion (fvecs/bvecs/ivecs) and binary index persistence.
//!
//! Vector files follow the BigANN convention: each record is a
//! little-endian 32-bit integer `d` followed by `d` components (f32 for
//! fvecs, unsigned bytes for bvecs, 32-bit integers for ivecs). All
//! records in a file must share `d`.
//!
//! Index files: magic `APGR`, format version u32 = 1, vertex count u64,
//! start vertex u32, then per vertex a u32 degree and that many u32
//! neighbor ids, everything little-endian. Neighbor order is persisted
//! as-is because prune semantics depend on it. A JSON sidecar
//! `<path>.meta.json` records build parameters and an FNV-1a checksum of
//! the raw dataset values.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, MetricKind};
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;

const INDEX_MAGIC: &[u8; 4] = b"APGR";
const INDEX_VERSION: u32 = 1;

/// Vector-file flavors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecsKind {
    Fvecs,
    Bvecs,
    Ivecs,
}

fn read_raw_records(
    bytes: &[u8],
    elem_size: usize,
    limit: Option<usize>,
    path: &Path,
) -> Result<(usize, Vec<Vec<u8>>)> {
    if limit == Some(0) {
        return Err(Error::Format(format!(
            "{}: limit 0 would produce an empty dataset",
            path.display()
        )));
    }
    let mut records = Vec::new();
    let mut dim: Option<usize> = None;
    let mut pos = 0usize;
    while pos < bytes.len() {
        if let Some(lim) = limit {
            if records.len() == lim {
                break;
            }
        }
        if pos + 4 > bytes.len() {
            return Err(Error::Format(format!(
                "{}: truncated record header at byte {pos}",
                path.display()
            )));
        }
        let d = i32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap());
        pos += 4;
        if d <= 0 {
            return Err(Error::Format(format!(
                "{}: non-positive dimension {d}",
                path.display()
            )));
        }
        let d = d as usize;
        match dim {
            None => dim = Some(d),
            Some(expect) if expect != d => {
                return Err(Error::Format(format!(
                    "{}: inconsistent dimension {d}, expected {expect}",
                    path.display()
                )));
            }
            _ => {}
        }
        let span = d * elem_size;
        if pos + span > bytes.len() {
            return Err(Error::Format(format!(
                "{}: truncated record payload at byte {pos}",
                path.display()
            )));
        }
        records.push(bytes[pos..pos + span].to_vec());
        pos += span;
    }
    if records.is_empty() {
        return Err(Error::Format(format!(
            "{}: file contains no records",
            path.display()
        )));
    }
    Ok((dim.unwrap(), records))
}

/// Reads an fvecs file into a Euclidean dataset; f32 components widen to
/// f64.
pub fn read_fvecs(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let (_, records) = read_raw_records(&bytes, 4, limit, path)?;
    let rows = records
        .into_iter()
        .map(|rec| {
            rec.chunks_exact(4)
                .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
                .collect()
        })
        .collect();
    Dataset::from_points(rows)
}

/// Reads a bvecs file, widening unsigned bytes to floats.
pub fn read_bvecs(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let (_, records) = read_raw_records(&bytes, 1, limit, path)?;
    let rows = records
        .into_iter()
        .map(|rec| rec.into_iter().map(f64::from).collect())
        .collect();
    Dataset::from_points(rows)
}

/// Reads an ivecs file as integer id lists (ground-truth neighbor lists).
pub fn read_ivecs(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Vec<Vec<u32>>> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let (_, records) = read_raw_records(&bytes, 4, limit, path)?;
    Ok(records
        .into_iter()
        .map(|rec| {
            rec.chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect()
        })
        .collect())
}

/// Writes coordinate rows as fvecs; f64 values are narrowed to f32.
pub fn write_fvecs_rows(path: impl AsRef<Path>, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        w.write_all(&(row.len() as i32).to_le_bytes())?;
        for &v in row {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes a Euclidean dataset as fvecs.
pub fn write_fvecs(path: impl AsRef<Path>, ds: &Dataset) -> Result<()> {
    if ds.metric() != MetricKind::Euclidean {
        return Err(Error::InvalidParams(
            "only coordinate-form datasets can be written as fvecs".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = (0..ds.n()).map(|i| ds.point(i).to_vec()).collect();
    write_fvecs_rows(path, &rows)
}

pub fn write_bvecs_rows(path: impl AsRef<Path>, rows: &[Vec<u8>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        w.write_all(&(row.len() as i32).to_le_bytes())?;
        w.write_all(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ivecs(path: impl AsRef<Path>, rows: &[Vec<u32>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        w.write_all(&(row.len() as i32).to_le_bytes())?;
        for &v in row {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Build provenance stored in the index sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexMeta {
    pub method: String,
    pub alpha: f64,
    #[serde(rename = "R")]
    pub r: Option<usize>,
    #[serde(rename = "L_build")]
    pub l_build: Option<usize>,
    pub seed: Option<u64>,
    pub dataset_checksum: u64,
}

/// 64-bit FNV-1a over the little-endian bytes of the dataset's raw
/// values (coordinates, or matrix entries for general metrics).
pub fn dataset_checksum(ds: &Dataset) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in ds.raw_values() {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

fn sidecar_path(path: &Path) -> PathBuf {
    PathBuf::from(format!("{}.meta.json", path.display()))
}

/// Persists a graph plus its metadata sidecar.
pub fn write_index(g: &ProximityGraph, meta: &IndexMeta, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if g.n() > u32::MAX as usize {
        return Err(Error::InvalidParams(
            "index format stores vertex ids as u32".into(),
        ));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(INDEX_MAGIC)?;
    w.write_all(&INDEX_VERSION.to_le_bytes())?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&(g.start() as u32).to_le_bytes())?;
    for p in 0..g.n() {
        let nbrs = g.out_neighbors(p);
        w.write_all(&(nbrs.len() as u32).to_le_bytes())?;
        for &q in nbrs {
            w.write_all(&(q as u32).to_le_bytes())?;
        }
    }
    w.flush()?;
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(meta)?)?;
    Ok(())
}

/// A graph loaded from disk together with sidecar info, when present.
#[derive(Debug)]
pub struct LoadedIndex {
    pub graph: ProximityGraph,
    pub meta: Option<IndexMeta>,
    /// `Some(false)` signals the sidecar checksum does not match `ds`;
    /// callers decide whether that is fatal.
    pub checksum_ok: Option<bool>,
}

/// Loads an index against the dataset it was built on.
pub fn read_index(path: impl AsRef<Path>, ds: &Dataset) -> Result<LoadedIndex> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let mut pos = 0usize;

    let take = |pos: &mut usize, len: usize| -> Result<&[u8]> {
        if *pos + len > bytes.len() {
            return Err(Error::Format(format!(
                "{}: truncated index file at byte {}",
                path.display(),
                *pos
            )));
        }
        let s = &bytes[*pos..*pos + len];
        *pos += len;
        Ok(s)
    };

    if take(&mut pos, 4)? != INDEX_MAGIC {
        return Err(Error::Format(format!("{}: bad magic", path.display())));
    }
    let version = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    if version != INDEX_VERSION {
        return Err(Error::Format(format!(
            "{}: unsupported format version {version}",
            path.display()
        )));
    }
    let n = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()) as usize;
    if n != ds.n() {
        return Err(Error::Format(format!(
            "{}: index has {n} vertices but dataset has {}",
            path.display(),
            ds.n()
        )));
    }
    let start = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
    let mut g = ProximityGraph::new(n, 0)?;
    g.set_start(start)
        .map_err(|_| Error::Format(format!("{}: start vertex out of range", path.display())))?;
    for p in 0..n {
        let deg = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
        // reject declared degrees that would over-read the buffer
        if pos + deg * 4 > bytes.len() {
            return Err(Error::Format(format!(
                "{}: vertex {p} declares degree {deg} beyond end of file",
                path.display()
            )));
        }
        let nbrs: Vec<usize> = take(&mut pos, deg * 4)?
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
            .collect();
        g.set_out_neighbors(p, nbrs)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    }
    if pos != bytes.len() {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes",
            path.display(),
            bytes.len() - pos
        )));
    }

    let side = sidecar_path(path);
    let (meta, checksum_ok) = if side.exists() {
        let meta: IndexMeta = serde_json::from_slice(&fs::read(side)?)?;
        let ok = meta.dataset_checksum == dataset_checksum(ds);
        (Some(meta), Some(ok))
    } else {
        (None, None)
    };

    Ok(LoadedIndex {
        graph: g,
        meta,
        checksum_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_random_dataset, RandomDist};

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn fvecs_single_record_layout() {
        let dir = tmp();
        let path = dir.path().join("one.fvecs");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&2i32.to_le_bytes());
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&2.0f32.to_le_bytes());
        assert_eq!(bytes.len(), 12);
        fs::write(&path, &bytes).unwrap();
        let ds = read_fvecs(&path, None).unwrap();
        assert_eq!((ds.n(), ds.dim()), (1, Some(2)));
        assert_eq!(ds.point(0), &[1.0, 2.0]);
    }

    #[test]
    fn limit_zero_is_an_error() {
        let dir = tmp();
        let path = dir.path().join("x.fvecs");
        write_fvecs_rows(&path, &[vec![1.0]]).unwrap();
        assert!(read_fvecs(&path, Some(0)).is_err());
    }

    #[test]
    fn generated_dataset_roundtrips_bit_exactly() {
        let dir = tmp();
        let path = dir.path().join("gen.fvecs");
        let ds = gen_random_dataset(10, 4, 1, RandomDist::Gaussian).unwrap();
        write_fvecs(&path, &ds).unwrap();
        let back = read_fvecs(&path, None).unwrap();
        for i in 0..10 {
            assert_eq!(ds.point(i), back.point(i));
        }
        assert_eq!(dataset_checksum(&ds), dataset_checksum(&back));
    }

    #[test]
    fn truncated_and_inconsistent_files_rejected() {
        let dir = tmp();
        let path = dir.path().join("bad.fvecs");

        let mut bytes = Vec::new();
        bytes.extend_from_slice(&3i32.to_le_bytes());
        bytes.extend_from_slice(&1.0f32.to_le_bytes()); // 2 floats missing
        fs::write(&path, &bytes).unwrap();
        assert!(read_fvecs(&path, None).is_err());

        let mut bytes = Vec::new();
        bytes.extend_from_slice(&1i32.to_le_bytes());
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&2i32.to_le_bytes());
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&2.0f32.to_le_bytes());
        fs::write(&path, &bytes).unwrap();
        assert!(read_fvecs(&path, None).is_err());

        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(-1i32).to_le_bytes());
        fs::write(&path, &bytes).unwrap();
        assert!(read_fvecs(&path, None).is_err());
    }

    #[test]
    fn bvecs_and_ivecs_roundtrip() {
        let dir = tmp();
        let bpath = dir.path().join("r.bvecs");
        write_bvecs_rows(&bpath, &[vec![0, 17, 255], vec![1, 2, 3]]).unwrap();
        let ds = read_bvecs(&bpath, None).unwrap();
        assert_eq!(ds.point(0), &[0.0, 17.0, 255.0]);

        let ipath = dir.path().join("r.ivecs");
        let rows = vec![vec![5u32, 0, 9], vec![1, 2, 3]];
        write_ivecs(&ipath, &rows).unwrap();
        assert_eq!(read_ivecs(&ipath, None).unwrap(), rows);
        assert_eq!(read_ivecs(&ipath, Some(1)).unwrap(), rows[..1]);
    }

    fn meta_for(ds: &Dataset) -> IndexMeta {
        IndexMeta {
            method: "slow".into(),
            alpha: 1.5,
            r: None,
            l_build: None,
            seed: None,
            dataset_checksum: dataset_checksum(ds),
        }
    }

    #[test]
    fn index_roundtrip_preserves_order() {
        let dir = tmp();
        let path = dir.path().join("g.idx");
        let ds = gen_random_dataset(8, 2, 2, RandomDist::UniformCube).unwrap();
        let mut g = ProximityGraph::new(8, 3).unwrap();
        g.set_out_neighbors(0, vec![5, 1, 7]).unwrap();
        g.set_out_neighbors(7, vec![2]).unwrap();
        write_index(&g, &meta_for(&ds), &path).unwrap();
        let loaded = read_index(&path, &ds).unwrap();
        assert_eq!(loaded.graph, g);
        assert_eq!(loaded.checksum_ok, Some(true));
        assert_eq!(loaded.meta.unwrap().method, "slow");
    }

    #[test]
    fn empty_adjacency_file_size() {
        let dir = tmp();
        let path = dir.path().join("e.idx");
        let ds = gen_random_dataset(3, 2, 4, RandomDist::UniformCube).unwrap();
        let g = ProximityGraph::new(3, 0).unwrap();
        write_index(&g, &meta_for(&ds), &path).unwrap();
        // magic + version + n + start + 3 degree words
        assert_eq!(fs::metadata(&path).unwrap().len(), 4 + 4 + 8 + 4 + 3 * 4);
    }

    #[test]
    fn index_validation_failures() {
        let dir = tmp();
        let path = dir.path().join("v.idx");
        let ds = gen_random_dataset(4, 2, 5, RandomDist::UniformCube).unwrap();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        g.set_out_neighbors(1, vec![0, 2]).unwrap();
        write_index(&g, &meta_for(&ds), &path).unwrap();

        // wrong dataset size
        let other = gen_random_dataset(5, 2, 5, RandomDist::UniformCube).unwrap();
        assert!(read_index(&path, &other).is_err());

        // checksum mismatch is reported, not fatal
        let shifted = gen_random_dataset(4, 2, 6, RandomDist::UniformCube).unwrap();
        let loaded = read_index(&path, &shifted).unwrap();
        assert_eq!(loaded.checksum_ok, Some(false));

        // bad magic
        let mut bytes = fs::read(&path).unwrap();
        bytes[0] = b'X';
        fs::write(&path, &bytes).unwrap();
        assert!(read_index(&path, &ds).is_err());
        bytes[0] = b'A';

        // degree over-read guard
        let deg_off = 4 + 4 + 8 + 4;
        bytes[deg_off..deg_off + 4].copy_from_slice(&1000u32.to_le_bytes());
        fs::write(&path, &bytes).unwrap();
        assert!(read_index(&path, &ds).is_err());
    }
}
