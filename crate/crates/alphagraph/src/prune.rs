//! Neighbor pruning: the alpha-parameterized greedy prune and the post-hoc
//! tuning pass built on it.
//!
//! The pruner rebuilds a vertex's out-list by repeatedly selecting a
//! candidate and discarding every remaining candidate the selection covers
//! by factor alpha: `alpha * D(selected, q) <= D(p, q)` removes `q`. With
//! `sorted = true` selection is nearest-first (the classic form); with
//! `sorted = false` it is lowest-index-first, or a seeded shuffle for
//! adversarial testing. Euclidean datasets evaluate the predicate on
//! squared distances with `alpha^2`, which never changes the outcome.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::graph::ProximityGraph;

/// Out-degree limit for a prune call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBound {
    Bounded(usize),
    Unbounded,
}

impl DegreeBound {
    fn cap(self) -> usize {
        match self {
            DegreeBound::Bounded(r) => r,
            DegreeBound::Unbounded => usize::MAX,
        }
    }
}

/// Parameters governing one prune call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneParams {
    pub alpha: f64,
    pub degree_bound: DegreeBound,
    pub sorted: bool,
    /// Selection order for the unsorted variant: `None` is deterministic
    /// ascending-index order, `Some(seed)` a seeded shuffle.
    pub shuffle_seed: Option<u64>,
}

impl PruneParams {
    pub fn sorted(alpha: f64, degree_bound: DegreeBound) -> Self {
        PruneParams {
            alpha,
            degree_bound,
            sorted: true,
            shuffle_seed: None,
        }
    }

    pub fn unsorted(alpha: f64, degree_bound: DegreeBound) -> Self {
        PruneParams {
            alpha,
            degree_bound,
            sorted: false,
            shuffle_seed: None,
        }
    }

    pub fn with_shuffle(mut self, seed: u64) -> Self {
        self.shuffle_seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "prune alpha must be >= 1, got {}",
                self.alpha
            )));
        }
        if let DegreeBound::Bounded(r) = self.degree_bound {
            if r == 0 {
                return Err(Error::InvalidParams("degree bound must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Computes the pruned out-list for `p` from `current ∪ candidates` minus
/// `p` itself, without touching any graph. Pure; callers guarantee index
/// validity. Neighbors come back in selection order (ascending distance
/// from `p` when `sorted`).
pub fn pruned_out_list(
    ds: &Dataset,
    p: usize,
    current: &[usize],
    candidates: &[usize],
    params: &PruneParams,
) -> Vec<usize> {
    let mut pool: Vec<usize> = candidates
        .iter()
        .chain(current)
        .copied()
        .filter(|&q| q != p)
        .collect();
    pool.sort_unstable();
    pool.dedup();

    let mut cand: Vec<(usize, f64)> = pool
        .into_iter()
        .map(|q| (q, ds.cmp_distance(p, q)))
        .collect();
    if params.sorted {
        cand.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    } else if let Some(seed) = params.shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p as u64));
        cand.shuffle(&mut rng);
    }

    let factor = ds.cmp_factor(params.alpha);
    let cap = params.degree_bound.cap();
    let mut alive = vec![true; cand.len()];
    let mut out = Vec::new();
    for i in 0..cand.len() {
        if !alive[i] {
            continue;
        }
        let sel = cand[i].0;
        out.push(sel);
        if out.len() >= cap {
            break;
        }
        for j in (i + 1)..cand.len() {
            if alive[j] && factor * ds.cmp_distance(sel, cand[j].0) <= cand[j].1 {
                alive[j] = false;
            }
        }
    }
    out
}

/// Rebuilds `p`'s out-list from `candidates ∪ N_out(p)` in place.
pub fn robust_prune(
    g: &mut ProximityGraph,
    ds: &Dataset,
    p: usize,
    candidates: &[usize],
    params: &PruneParams,
) -> Result<()> {
    params.validate()?;
    let n = ds.n();
    if g.n() != n {
        return Err(Error::InvalidParams(
            "graph and dataset sizes differ".into(),
        ));
    }
    if p >= n {
        return Err(Error::IndexOutOfRange { index: p, n });
    }
    if let Some(&bad) = candidates.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    let new_list = pruned_out_list(ds, p, g.out_neighbors(p), candidates, params);
    g.set_out_unchecked(p, new_list);
    Ok(())
}

/// Reprunes every vertex's out-list at a new target alpha without any
/// rebuild: each vertex is pruned against its own pre-call out-list with
/// no degree cap. Out-lists only shrink (as sets), and repeating the pass
/// at the same alpha is a no-op.
pub fn rp_tuning(g: &mut ProximityGraph, ds: &Dataset, alpha2: f64, sorted: bool) -> Result<()> {
    rp_tuning_with_mode(g, ds, alpha2, sorted, ExecMode::default())
}

/// [`rp_tuning`] with explicit sequential/parallel execution. The pass is
/// embarrassingly parallel over vertices: each vertex reads only its own
/// pre-call list, so output is scheduling-independent.
pub fn rp_tuning_with_mode(
    g: &mut ProximityGraph,
    ds: &Dataset,
    alpha2: f64,
    sorted: bool,
    mode: ExecMode,
) -> Result<()> {
    let params = if sorted {
        PruneParams::sorted(alpha2, DegreeBound::Unbounded)
    } else {
        PruneParams::unsorted(alpha2, DegreeBound::Unbounded)
    };
    params.validate()?;
    if g.n() != ds.n() {
        return Err(Error::InvalidParams(
            "graph and dataset sizes differ".into(),
        ));
    }
    let new_out = {
        let frozen = &*g;
        map_indices(frozen.n(), mode, |p| {
            pruned_out_list(ds, p, frozen.out_neighbors(p), &[], &params)
        })
    };
    g.replace_adjacency(new_out);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::gen_random_dataset;
    use crate::dataset::RandomDist;

    /// p at coordinate 0, candidates at 3, 1.5, 1 in dataset-index order.
    fn line_dataset() -> Dataset {
        Dataset::from_points(vec![vec![0.0], vec![3.0], vec![1.5], vec![1.0]]).unwrap()
    }

    #[test]
    fn sorted_prune_hand_trace() {
        let ds = line_dataset();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        let params = PruneParams::sorted(2.0, DegreeBound::Unbounded);
        robust_prune(&mut g, &ds, 0, &[1, 2, 3], &params).unwrap();
        // select 1 (closest), prune 1.5 because 2*0.5 <= 1.5, keep 3, select 3
        assert_eq!(g.out_neighbors(0), &[3, 1]);
    }

    #[test]
    fn unsorted_prune_hand_trace() {
        let ds = line_dataset();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        let params = PruneParams::unsorted(2.0, DegreeBound::Unbounded);
        robust_prune(&mut g, &ds, 0, &[1, 2, 3], &params).unwrap();
        // lowest index first: select 3 (prunes nothing), select 1.5,
        // prune 1 because 2*0.5 <= 1 (boundary case prunes)
        assert_eq!(g.out_neighbors(0), &[1, 2]);
    }

    #[test]
    fn single_candidate_kept() {
        let ds = line_dataset();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        for alpha in [1.0, 2.0, 10.0] {
            let params = PruneParams::sorted(alpha, DegreeBound::Bounded(1));
            robust_prune(&mut g, &ds, 0, &[2], &params).unwrap();
            assert_eq!(g.out_neighbors(0), &[2]);
        }
    }

    #[test]
    fn degree_cap_respected() {
        let ds = gen_random_dataset(50, 3, 1, RandomDist::UniformCube).unwrap();
        let mut g = ProximityGraph::new(50, 0).unwrap();
        let cands: Vec<usize> = (1..50).collect();
        let params = PruneParams::sorted(1.0, DegreeBound::Bounded(4));
        robust_prune(&mut g, &ds, 0, &cands, &params).unwrap();
        assert_eq!(g.out_neighbors(0).len(), 4);
        // alpha = 1 prunes only exact-boundary cases, so the cap binds
    }

    #[test]
    fn sorted_output_is_distance_ordered() {
        let ds = gen_random_dataset(80, 4, 3, RandomDist::Gaussian).unwrap();
        let mut g = ProximityGraph::new(80, 0).unwrap();
        let cands: Vec<usize> = (1..80).collect();
        let params = PruneParams::sorted(1.3, DegreeBound::Unbounded);
        robust_prune(&mut g, &ds, 5, &cands, &params).unwrap();
        let out = g.out_neighbors(5);
        assert!(!out.is_empty());
        for w in out.windows(2) {
            assert!(ds.distance(5, w[0]) <= ds.distance(5, w[1]));
        }
    }

    #[test]
    fn pairwise_survivor_property() {
        let ds = gen_random_dataset(80, 4, 9, RandomDist::Gaussian).unwrap();
        for sorted in [true, false] {
            let mut g = ProximityGraph::new(80, 0).unwrap();
            let cands: Vec<usize> = (0..80).filter(|&q| q != 7).collect();
            let alpha = 1.4;
            let params = PruneParams {
                alpha,
                degree_bound: DegreeBound::Unbounded,
                sorted,
                shuffle_seed: None,
            };
            robust_prune(&mut g, &ds, 7, &cands, &params).unwrap();
            let out = g.out_neighbors(7);
            for (i, &a) in out.iter().enumerate() {
                for &b in &out[i + 1..] {
                    // a was selected before b and did not cover it
                    assert!(alpha * ds.distance(a, b) > ds.distance(7, b));
                }
            }
        }
    }

    #[test]
    fn tuning_no_op_on_tiny_lists() {
        let ds = line_dataset();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        g.set_out_neighbors(0, vec![2]).unwrap();
        g.set_out_neighbors(1, vec![0]).unwrap();
        let before = g.clone();
        rp_tuning(&mut g, &ds, 1.2, true).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn tuning_shrinks_monotonically_and_is_idempotent() {
        let ds = gen_random_dataset(120, 4, 5, RandomDist::UniformCube).unwrap();
        let mut g = ProximityGraph::new(120, 0).unwrap();
        // dense random start: 20 nearest by index distance, just a stress list
        for p in 0..120 {
            let nbrs: Vec<usize> = (0..120).filter(|&q| q != p).take(20).collect();
            g.set_out_neighbors(p, nbrs).unwrap();
        }
        let before = g.clone();
        rp_tuning(&mut g, &ds, 1.1, true).unwrap();
        g.validate().unwrap();
        for p in 0..120 {
            let pre: std::collections::HashSet<_> = before.out_neighbors(p).iter().collect();
            for q in g.out_neighbors(p) {
                assert!(pre.contains(q));
            }
        }
        let once = g.clone();
        rp_tuning(&mut g, &ds, 1.1, true).unwrap();
        assert_eq!(g, once);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let ds = gen_random_dataset(150, 3, 13, RandomDist::Gaussian).unwrap();
        let mut g1 = ProximityGraph::new(150, 0).unwrap();
        for p in 0..150 {
            let nbrs: Vec<usize> = (0..150).filter(|&q| q != p).take(15).collect();
            g1.set_out_neighbors(p, nbrs).unwrap();
        }
        let mut g2 = g1.clone();
        rp_tuning_with_mode(&mut g1, &ds, 1.2, true, ExecMode::Sequential).unwrap();
        rp_tuning_with_mode(&mut g2, &ds, 1.2, true, ExecMode::Parallel).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn shuffled_unsorted_mode_is_deterministic_per_seed() {
        let ds = gen_random_dataset(60, 3, 21, RandomDist::UniformCube).unwrap();
        let cands: Vec<usize> = (1..60).collect();
        let params = PruneParams::unsorted(1.5, DegreeBound::Unbounded).with_shuffle(99);
        let a = pruned_out_list(&ds, 0, &[], &cands, &params);
        let b = pruned_out_list(&ds, 0, &[], &cands, &params);
        assert_eq!(a, b);
        let c = pruned_out_list(
            &ds,
            0,
            &[],
            &cands,
            &PruneParams::unsorted(1.5, DegreeBound::Unbounded).with_shuffle(100),
        );
        // different seed may reorder; both remain valid prune outputs
        assert!(!c.is_empty());
    }

    #[test]
    fn invalid_params_rejected() {
        let ds = line_dataset();
        let mut g = ProximityGraph::new(4, 0).unwrap();
        let bad_alpha = PruneParams::sorted(0.9, DegreeBound::Unbounded);
        assert!(robust_prune(&mut g, &ds, 0, &[1], &bad_alpha).is_err());
        let bad_r = PruneParams::sorted(1.5, DegreeBound::Bounded(0));
        assert!(robust_prune(&mut g, &ds, 0, &[1], &bad_r).is_err());
        let ok = PruneParams::sorted(1.5, DegreeBound::Unbounded);
        assert!(robust_prune(&mut g, &ds, 9, &[1], &ok).is_err());
        assert!(robust_prune(&mut g, &ds, 0, &[9], &ok).is_err());
    }
}
