//! Datasets and metrics: distance evaluation, medoid, aspect ratio, and
//! synthetic point generation.
//!
//! A [`Dataset`] is either an `n x d` array of coordinates under the
//! Euclidean metric or an explicit `n x n` distance matrix for a general
//! metric. Points must be pairwise distinct; duplicates are rejected at
//! ingest because downstream reachability ratios divide by pairwise
//! distances.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};

/// Which metric backs a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    /// Coordinate form, distances are l2 norms of coordinate differences.
    Euclidean,
    /// Explicit distance-matrix form.
    General,
}

/// Max pairwise distance divided by min pairwise distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspectRatio {
    pub delta: f64,
}

/// Point distributions for synthetic dataset generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomDist {
    UniformCube,
    Gaussian,
    /// `k` Gaussian blobs around uniformly placed centers.
    Clustered(usize),
}

#[derive(Debug, Clone)]
enum Storage {
    Coords { dim: usize, data: Vec<f64> },
    Matrix { data: Vec<f64> },
}

/// An immutable point set with a metric. Safe to share across threads.
#[derive(Debug, Clone)]
pub struct Dataset {
    n: usize,
    storage: Storage,
}

impl Dataset {
    /// Builds a Euclidean dataset from coordinate rows.
    ///
    /// Rejects empty input, ragged or empty rows, non-finite values, and
    /// duplicate points.
    pub fn from_points(rows: Vec<Vec<f64>>) -> Result<Dataset> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidDataset("need at least one point".into()));
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::InvalidDataset("points must have dimension >= 1".into()));
        }
        let mut data = Vec::with_capacity(n * dim);
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidDataset(format!(
                    "point {} has dimension {}, expected {}",
                    i,
                    row.len(),
                    dim
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidDataset(format!(
                        "point {} has non-finite coordinate {}",
                        i, v
                    )));
                }
            }
            if let Some(&j) = seen.get(&canonical_bits(row)) {
                return Err(Error::InvalidDataset(format!(
                    "points {} and {} are identical",
                    j, i
                )));
            }
            seen.insert(canonical_bits(row), i);
            data.extend_from_slice(row);
        }
        Ok(Dataset {
            n,
            storage: Storage::Coords { dim, data },
        })
    }

    /// Builds a general-metric dataset from a full distance matrix.
    ///
    /// The matrix must be square with a zero diagonal, exactly symmetric,
    /// strictly positive off the diagonal, and satisfy the triangle
    /// inequality for every triple (validated here, O(n^3), tolerance
    /// 1e-9 relative to the largest entry involved).
    pub fn from_distance_matrix(matrix: Vec<Vec<f64>>) -> Result<Dataset> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidDataset("need at least one point".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "matrix row {} has length {}, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidDataset(format!(
                    "matrix diagonal entry ({i},{i}) must be zero"
                )));
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidDataset(format!(
                        "matrix entry ({i},{j}) = {d} is not a finite nonnegative value"
                    )));
                }
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidDataset(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
                if i != j && d == 0.0 {
                    return Err(Error::InvalidDataset(format!(
                        "points {i} and {j} are identical (zero distance)"
                    )));
                }
            }
        }
        let ds = Dataset {
            n,
            storage: Storage::Matrix { data },
        };
        ds.validate_triangle(1e-9)?;
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coordinate dimension, or `None` for matrix-form datasets.
    pub fn dim(&self) -> Option<usize> {
        match &self.storage {
            Storage::Coords { dim, .. } => Some(*dim),
            Storage::Matrix { .. } => None,
        }
    }

    pub fn metric(&self) -> MetricKind {
        match &self.storage {
            Storage::Coords { .. } => MetricKind::Euclidean,
            Storage::Matrix { .. } => MetricKind::General,
        }
    }

    /// Coordinates of point `i`. Panics on matrix-form datasets.
    pub fn point(&self, i: usize) -> &[f64] {
        match &self.storage {
            Storage::Coords { dim, data } => &data[i * dim..(i + 1) * dim],
            Storage::Matrix { .. } => panic!("matrix-form dataset has no coordinates"),
        }
    }

    /// Raw coordinate buffer bytes view used for checksumming; row-major
    /// coordinates in Euclidean form, row-major matrix entries otherwise.
    pub(crate) fn raw_values(&self) -> &[f64] {
        match &self.storage {
            Storage::Coords { data, .. } => data,
            Storage::Matrix { data } => data,
        }
    }

    /// Distance between points `i` and `j`. Panics if an index is out of
    /// range.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "point index out of range");
        match &self.storage {
            Storage::Coords { dim, data } => {
                l2_sq(&data[i * dim..(i + 1) * dim], &data[j * dim..(j + 1) * dim]).sqrt()
            }
            Storage::Matrix { data } => data[i * self.n + j],
        }
    }

    /// Distance in comparison space: squared Euclidean for coordinate
    /// form (no square root in inner loops), the raw matrix entry
    /// otherwise. Monotone in the true distance, so argmin/argmax and
    /// threshold tests agree with [`Dataset::distance`] once thresholds
    /// are mapped through [`Dataset::cmp_factor`].
    #[inline]
    pub fn cmp_distance(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "point index out of range");
        match &self.storage {
            Storage::Coords { dim, data } => {
                l2_sq(&data[i * dim..(i + 1) * dim], &data[j * dim..(j + 1) * dim])
            }
            Storage::Matrix { data } => data[i * self.n + j],
        }
    }

    /// Maps a multiplicative distance factor into comparison space
    /// (`alpha^2` in Euclidean form, `alpha` in matrix form).
    #[inline]
    pub fn cmp_factor(&self, alpha: f64) -> f64 {
        match &self.storage {
            Storage::Coords { .. } => alpha * alpha,
            Storage::Matrix { .. } => alpha,
        }
    }

    /// Inverse of [`Dataset::cmp_factor`] for reporting ratios measured in
    /// comparison space as true-distance ratios.
    #[inline]
    pub fn from_cmp_ratio(&self, r: f64) -> f64 {
        match &self.storage {
            Storage::Coords { .. } => r.sqrt(),
            Storage::Matrix { .. } => r,
        }
    }

    /// Index minimizing the sum of distances to all points; ties break to
    /// the lowest index. Exact O(n^2).
    pub fn medoid(&self) -> usize {
        self.medoid_with_mode(ExecMode::default())
    }

    pub fn medoid_with_mode(&self, mode: ExecMode) -> usize {
        let sums = map_indices(self.n, mode, |i| {
            let mut s = 0.0;
            for j in 0..self.n {
                if j != i {
                    s += self.distance(i, j);
                }
            }
            s
        });
        let mut best = 0;
        for i in 1..self.n {
            if sums[i] < sums[best] {
                best = i;
            }
        }
        best
    }

    /// Exact brute-force aspect ratio over all distinct pairs.
    pub fn aspect_ratio(&self) -> Result<AspectRatio> {
        self.aspect_ratio_with_mode(ExecMode::default())
    }

    pub fn aspect_ratio_with_mode(&self, mode: ExecMode) -> Result<AspectRatio> {
        if self.n < 2 {
            return Err(Error::InvalidParams(
                "aspect ratio needs at least two points".into(),
            ));
        }
        let extremes = map_indices(self.n, mode, |i| {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0_f64;
            for j in (i + 1)..self.n {
                let d = self.cmp_distance(i, j);
                lo = lo.min(d);
                hi = hi.max(d);
            }
            (lo, hi)
        });
        let lo = extremes.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
        let hi = extremes.iter().map(|e| e.1).fold(0.0, f64::max);
        let delta = match self.metric() {
            MetricKind::Euclidean => hi.sqrt() / lo.sqrt(),
            MetricKind::General => hi / lo,
        };
        Ok(AspectRatio { delta })
    }

    /// Checks the triangle inequality for every ordered triple:
    /// `d(i,k) <= d(i,j) + d(j,k) + tol * scale`. O(n^3).
    pub fn validate_triangle(&self, tol: f64) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                if j == i {
                    continue;
                }
                let dij = self.distance(i, j);
                for k in 0..self.n {
                    if k == i || k == j {
                        continue;
                    }
                    let dik = self.distance(i, k);
                    let djk = self.distance(j, k);
                    let slack = tol * dik.max(dij + djk).max(1.0);
                    if dik > dij + djk + slack {
                        return Err(Error::InvalidDataset(format!(
                            "triangle inequality violated: d({i},{k})={dik} > d({i},{j})+d({j},{k})={}",
                            dij + djk
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn l2_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        s += d * d;
    }
    s
}

/// Squared Euclidean distance between arbitrary coordinate slices.
pub fn point_distance_sq(a: &[f64], b: &[f64]) -> f64 {
    l2_sq(a, b)
}

// Canonical f64 bit pattern per row so -0.0 and +0.0 hash identically;
// distance zero in coordinate form implies bitwise-equal canonical rows.
fn canonical_bits(row: &[f64]) -> Vec<u64> {
    row.iter()
        .map(|&v| if v == 0.0 { 0.0f64 } else { v }.to_bits())
        .collect()
}

/// Deterministic synthetic dataset. Coordinates are quantized to f32
/// precision so fvecs files round-trip bit-exactly. Duplicate draws are
/// rejected and regenerated.
pub fn gen_random_dataset(n: usize, d: usize, seed: u64, dist: RandomDist) -> Result<Dataset> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParams("need n >= 1 and d >= 1".into()));
    }
    if let RandomDist::Clustered(k) = dist {
        if k == 0 {
            return Err(Error::InvalidParams("clustered(k) needs k >= 1".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = PointSampler::new(d, dist, &mut rng);

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::with_capacity(n);
    for i in 0..n {
        let mut tries = 0;
        loop {
            let row = sampler.sample(i, &mut rng);
            if seen.insert(canonical_bits(&row), ()).is_none() {
                rows.push(row);
                break;
            }
            tries += 1;
            if tries > 1000 {
                return Err(Error::InvalidParams(
                    "could not draw distinct points; space too small".into(),
                ));
            }
        }
    }
    Dataset::from_points(rows)
}

/// `count` query vectors from the same family of distributions, no
/// distinctness requirement.
pub fn gen_random_queries(count: usize, d: usize, seed: u64, dist: RandomDist) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = PointSampler::new(d, dist, &mut rng);
    (0..count).map(|i| sampler.sample(i, &mut rng)).collect()
}

/// Queries drawn by jittering random dataset points with per-dimension
/// Gaussian noise at 10% of the data's standard deviation. Useful when a
/// dataset comes from a file and its generating distribution is unknown.
pub fn gen_jittered_queries(ds: &Dataset, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let d = ds
        .dim()
        .ok_or_else(|| Error::InvalidParams("jittered queries need coordinate form".into()))?;
    let n = ds.n();
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(ds.point(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut var = vec![0.0; d];
    for i in 0..n {
        for ((v, m), x) in var.iter_mut().zip(&mean).zip(ds.point(i)) {
            *v += (x - m) * (x - m);
        }
    }
    let sigma: Vec<f64> = var
        .iter()
        .map(|v| 0.1 * (v / n as f64).sqrt().max(1e-12))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0f64, 1.0).expect("unit normal");
    Ok((0..count)
        .map(|_| {
            let base = rng.gen_range(0..n);
            ds.point(base)
                .iter()
                .zip(&sigma)
                .map(|(x, s)| x + s * normal.sample(&mut rng))
                .collect()
        })
        .collect())
}

struct PointSampler {
    d: usize,
    dist: RandomDist,
    centers: Vec<Vec<f64>>,
    normal: Normal<f32>,
    blob: Normal<f32>,
}

impl PointSampler {
    fn new(d: usize, dist: RandomDist, rng: &mut ChaCha8Rng) -> Self {
        let centers = match dist {
            RandomDist::Clustered(k) => (0..k)
                .map(|_| (0..d).map(|_| f64::from(rng.gen::<f32>() * 10.0)).collect())
                .collect(),
            _ => Vec::new(),
        };
        PointSampler {
            d,
            dist,
            centers,
            normal: Normal::new(0.0f32, 1.0).expect("unit normal"),
            blob: Normal::new(0.0f32, 0.25).expect("blob normal"),
        }
    }

    fn sample(&mut self, i: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self.dist {
            RandomDist::UniformCube => (0..self.d).map(|_| f64::from(rng.gen::<f32>())).collect(),
            RandomDist::Gaussian => (0..self.d)
                .map(|_| f64::from(self.normal.sample(rng)))
                .collect(),
            RandomDist::Clustered(k) => {
                let c = &self.centers[i % k];
                c.iter()
                    .map(|&cv| {
                        let noise = self.blob.sample(rng);
                        f64::from((cv as f32) + noise)
                    })
                    .collect()
            }
        }
    }
}
