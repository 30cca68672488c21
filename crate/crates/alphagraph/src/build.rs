//! Index construction: the provably reachable slow preprocessing and the
//! degree-capped Vamana heuristic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::graph::ProximityGraph;
use crate::prune::{pruned_out_list, DegreeBound, PruneParams};
use crate::search::{greedy_search, Query};

/// Vamana construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VamanaParams {
    pub alpha: f64,
    /// Maximum out-degree.
    pub r: usize,
    /// Candidate list size for the per-vertex search during construction.
    pub l_build: usize,
    pub seed: u64,
}

impl VamanaParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.alpha >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be >= 1, got {}",
                self.alpha
            )));
        }
        if self.r == 0 || self.l_build == 0 {
            return Err(Error::InvalidParams("R and L_build must be >= 1".into()));
        }
        if self.r >= n {
            return Err(Error::InvalidParams(format!(
                "degree bound R = {} must be below n = {}",
                self.r, n
            )));
        }
        Ok(())
    }
}

/// Prunes the full dataset at every vertex: O(n^3), but the result is
/// alpha-reachable by construction. Start vertex is the medoid.
pub fn build_slow(ds: &Dataset, alpha: f64) -> Result<ProximityGraph> {
    build_slow_with_mode(ds, alpha, ExecMode::default())
}

pub fn build_slow_with_mode(ds: &Dataset, alpha: f64, mode: ExecMode) -> Result<ProximityGraph> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidParams(format!(
            "slow build needs alpha > 1, got {alpha}"
        )));
    }
    let n = ds.n();
    if n < 2 {
        return Err(Error::InvalidParams("slow build needs n >= 2".into()));
    }
    let params = PruneParams::sorted(alpha, DegreeBound::Unbounded);
    let out = map_indices(n, mode, |p| {
        let candidates: Vec<usize> = (0..n).filter(|&q| q != p).collect();
        pruned_out_list(ds, p, &[], &candidates, &params)
    });
    let mut g = ProximityGraph::new(n, ds.medoid_with_mode(mode))?;
    g.replace_adjacency(out);
    Ok(g)
}

/// Two-pass degree-capped construction, deterministic for a fixed seed.
///
/// Every vertex starts with `R` random out-neighbors. Vertices are then
/// processed in a seeded random permutation, twice: first with alpha 1,
/// then with the configured alpha. Each visit searches for the vertex's
/// own point from the medoid, prunes the visited set into the out-list,
/// and inserts back-edges, repruning any neighbor pushed over the cap.
/// Back-edge mutation makes the pass order-dependent, so this builder is
/// sequential; the fixed seed is the reference output.
pub fn build_vamana(ds: &Dataset, params: &VamanaParams) -> Result<ProximityGraph> {
    let n = ds.n();
    params.validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let medoid = ds.medoid();
    let mut g = ProximityGraph::new(n, medoid)?;

    // random R-regular initialization, self excluded
    for p in 0..n {
        let picks = rand::seq::index::sample(&mut rng, n - 1, params.r);
        let nbrs: Vec<usize> = picks
            .into_iter()
            .map(|v| if v >= p { v + 1 } else { v })
            .collect();
        g.set_out_unchecked(p, nbrs);
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    for pass_alpha in [1.0, params.alpha] {
        let prune = PruneParams::sorted(pass_alpha, DegreeBound::Bounded(params.r));
        for &p in &perm {
            let found = greedy_search(&g, ds, Query::Index(p), 1, params.l_build)?;
            let new_list = pruned_out_list(ds, p, g.out_neighbors(p), &found.visited, &prune);
            g.set_out_unchecked(p, new_list);
            let targets = g.out_neighbors(p).to_vec();
            for q in targets {
                if !g.out_neighbors(q).contains(&p) {
                    g.push_neighbor(q, p);
                }
                if g.out_neighbors(q).len() > params.r {
                    let repruned = pruned_out_list(ds, q, g.out_neighbors(q), &[], &prune);
                    g.set_out_unchecked(q, repruned);
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_random_dataset, RandomDist};

    #[test]
    fn two_points_point_at_each_other() {
        let ds = Dataset::from_points(vec![vec![0.0], vec![5.0]]).unwrap();
        let g = build_slow(&ds, 1.5).unwrap();
        assert_eq!(g.out_neighbors(0), &[1]);
        assert_eq!(g.out_neighbors(1), &[0]);
    }

    #[test]
    fn slow_build_hand_trace() {
        let ds = Dataset::from_points(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let g = build_slow(&ds, 2.0).unwrap();
        assert_eq!(g.out_neighbors(0), &[1, 2]);
        assert_eq!(g.out_neighbors(1), &[0, 2]);
        assert_eq!(g.out_neighbors(2), &[1]);
        g.validate().unwrap();
        // start defaults to the medoid
        assert_eq!(g.start(), ds.medoid());
    }

    #[test]
    fn slow_build_rejects_bad_alpha() {
        let ds = Dataset::from_points(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(build_slow(&ds, 1.0).is_err());
    }

    #[test]
    fn slow_build_modes_agree() {
        let ds = gen_random_dataset(90, 3, 17, RandomDist::Gaussian).unwrap();
        let a = build_slow_with_mode(&ds, 1.4, ExecMode::Sequential).unwrap();
        let b = build_slow_with_mode(&ds, 1.4, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vamana_deterministic_and_capped() {
        let ds = gen_random_dataset(300, 8, 9, RandomDist::UniformCube).unwrap();
        let params = VamanaParams {
            alpha: 1.2,
            r: 16,
            l_build: 24,
            seed: 42,
        };
        let a = build_vamana(&ds, &params).unwrap();
        let b = build_vamana(&ds, &params).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        assert!(a.degree_stats().max_out_degree <= 16);
        assert_eq!(a.start(), ds.medoid());
    }

    #[test]
    fn vamana_rejects_r_at_or_above_n() {
        let ds = gen_random_dataset(10, 2, 1, RandomDist::UniformCube).unwrap();
        let params = VamanaParams {
            alpha: 1.2,
            r: 10,
            l_build: 12,
            seed: 0,
        };
        assert!(build_vamana(&ds, &params).is_err());
    }
}
