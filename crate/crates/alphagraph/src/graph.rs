//! The directed proximity-graph index structure.
//!
//! Vertices correspond one-to-one to dataset indices. Out-lists preserve
//! insertion order: pruning emits neighbors in ascending distance from the
//! owning vertex, and auditors and tests inspect that order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed out-adjacency over dataset indices plus a designated start
/// vertex for search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityGraph {
    out: Vec<Vec<usize>>,
    start: usize,
}

/// Exact degree counts for a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub max_out_degree: usize,
    pub avg_out_degree: f64,
    pub edge_count: usize,
}

impl ProximityGraph {
    /// An edgeless graph on `n` vertices with the given start vertex.
    pub fn new(n: usize, start: usize) -> Result<ProximityGraph> {
        if n == 0 {
            return Err(Error::InvalidParams("graph needs at least one vertex".into()));
        }
        if start >= n {
            return Err(Error::IndexOutOfRange { index: start, n });
        }
        Ok(ProximityGraph {
            out: vec![Vec::new(); n],
            start,
        })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn set_start(&mut self, start: usize) -> Result<()> {
        if start >= self.n() {
            return Err(Error::IndexOutOfRange { index: start, n: self.n() });
        }
        self.start = start;
        Ok(())
    }

    /// Current out-neighbors of `p` in insertion order.
    pub fn out_neighbors(&self, p: usize) -> &[usize] {
        &self.out[p]
    }

    /// Replaces `p`'s out-list. Rejects self-loops, duplicates, and
    /// out-of-range indices.
    pub fn set_out_neighbors(&mut self, p: usize, nbrs: Vec<usize>) -> Result<()> {
        let n = self.n();
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, n });
        }
        for (pos, &q) in nbrs.iter().enumerate() {
            if q >= n {
                return Err(Error::InvalidNeighbors {
                    vertex: p,
                    reason: format!("neighbor {q} out of range"),
                });
            }
            if q == p {
                return Err(Error::InvalidNeighbors {
                    vertex: p,
                    reason: "self-loop".into(),
                });
            }
            if nbrs[..pos].contains(&q) {
                return Err(Error::InvalidNeighbors {
                    vertex: p,
                    reason: format!("duplicate neighbor {q}"),
                });
            }
        }
        self.out[p] = nbrs;
        Ok(())
    }

    /// Replaces `p`'s out-list without validation. Callers guarantee the
    /// list is self-loop-free, duplicate-free and in range.
    pub(crate) fn set_out_unchecked(&mut self, p: usize, nbrs: Vec<usize>) {
        self.out[p] = nbrs;
    }

    /// Swaps in a full adjacency produced by a per-vertex pass.
    pub(crate) fn replace_adjacency(&mut self, out: Vec<Vec<usize>>) {
        debug_assert_eq!(out.len(), self.out.len());
        self.out = out;
    }

    pub(crate) fn push_neighbor(&mut self, p: usize, q: usize) {
        self.out[p].push(q);
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let edge_count: usize = self.out.iter().map(Vec::len).sum();
        let max_out_degree = self.out.iter().map(Vec::len).max().unwrap_or(0);
        DegreeStats {
            max_out_degree,
            avg_out_degree: edge_count as f64 / self.n() as f64,
            edge_count,
        }
    }

    /// Structural invariant check used by tests after every builder and
    /// pruner operation.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.start >= n {
            return Err(Error::IndexOutOfRange { index: self.start, n });
        }
        let mut seen = vec![false; n];
        for (p, nbrs) in self.out.iter().enumerate() {
            for &q in nbrs {
                if q >= n {
                    return Err(Error::InvalidNeighbors {
                        vertex: p,
                        reason: format!("neighbor {q} out of range"),
                    });
                }
                if q == p {
                    return Err(Error::InvalidNeighbors {
                        vertex: p,
                        reason: "self-loop".into(),
                    });
                }
                if seen[q] {
                    return Err(Error::InvalidNeighbors {
                        vertex: p,
                        reason: format!("duplicate neighbor {q}"),
                    });
                }
                seen[q] = true;
            }
            for &q in nbrs {
                seen[q] = false;
            }
        }
        Ok(())
    }
}
