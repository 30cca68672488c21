//! Exact reachability measurement by brute force over all ordered pairs.

use serde::Serialize;

use crate::dataset::Dataset;
use crate::exec::{map_indices, ExecMode};
use crate::graph::ProximityGraph;

/// The measured reachability of a graph.
///
/// `alpha_star` is the minimum over ordered non-edge pairs `(p, z)` of the
/// maximum over out-neighbors `p'` of `D(p,z) / D(p',z)`: the largest
/// factor alpha for which every pair is alpha-reachable. It is
/// `f64::INFINITY` for a complete graph (every pair is an edge) and `0.0`
/// when some vertex with an empty out-list has a non-edge pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReachabilityReport {
    pub alpha_star: f64,
    /// The ordered pair attaining the minimum, if any non-edge pair exists.
    pub worst_pair: Option<(usize, usize)>,
    /// The out-neighbor of `worst_pair.0` maximizing the ratio.
    pub witness: Option<usize>,
}

/// Exact audit, O(n^2 * max degree). Ratios are evaluated in comparison
/// space (squared for Euclidean data) and mapped back once at the end.
pub fn audit_reachability(g: &ProximityGraph, ds: &Dataset) -> ReachabilityReport {
    audit_reachability_with_mode(g, ds, ExecMode::default())
}

pub fn audit_reachability_with_mode(
    g: &ProximityGraph,
    ds: &Dataset,
    mode: ExecMode,
) -> ReachabilityReport {
    assert_eq!(g.n(), ds.n(), "graph and dataset sizes differ");
    let n = g.n();

    // per-source minimum: (ratio in cmp space, target z, witness)
    let per_source = map_indices(n, mode, |p| {
        let nbrs = g.out_neighbors(p);
        let mut is_nbr = vec![false; n];
        for &q in nbrs {
            is_nbr[q] = true;
        }
        let mut worst: Option<(f64, usize, Option<usize>)> = None;
        for z in 0..n {
            if z == p || is_nbr[z] {
                continue;
            }
            if nbrs.is_empty() {
                // no witness can ever serve this pair
                worst = Some((0.0, z, None));
                break;
            }
            let dpz = ds.cmp_distance(p, z);
            let mut best = f64::NEG_INFINITY;
            let mut best_witness = nbrs[0];
            for &w in nbrs {
                let r = dpz / ds.cmp_distance(w, z);
                if r > best {
                    best = r;
                    best_witness = w;
                }
            }
            match worst {
                Some((cur, _, _)) if cur <= best => {}
                _ => worst = Some((best, z, Some(best_witness))),
            }
        }
        worst
    });

    let mut global: Option<(f64, usize, usize, Option<usize>)> = None;
    for (p, entry) in per_source.iter().enumerate() {
        if let Some((ratio, z, w)) = entry {
            match global {
                Some((cur, _, _, _)) if cur <= *ratio => {}
                _ => global = Some((*ratio, p, *z, *w)),
            }
        }
    }

    match global {
        None => ReachabilityReport {
            alpha_star: f64::INFINITY,
            worst_pair: None,
            witness: None,
        },
        Some((ratio, p, z, w)) => ReachabilityReport {
            alpha_star: ds.from_cmp_ratio(ratio),
            worst_pair: Some((p, z)),
            witness: w,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_slow;
    use crate::dataset::{gen_random_dataset, RandomDist};

    #[test]
    fn complete_graph_is_infinitely_reachable() {
        let ds = gen_random_dataset(12, 2, 3, RandomDist::UniformCube).unwrap();
        let mut g = ProximityGraph::new(12, 0).unwrap();
        for p in 0..12 {
            g.set_out_neighbors(p, (0..12).filter(|&q| q != p).collect())
                .unwrap();
        }
        let rep = audit_reachability(&g, &ds);
        assert!(rep.alpha_star.is_infinite());
        assert_eq!(rep.worst_pair, None);
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn hand_enumerated_audit() {
        // points 0, 1, 3; edges 0->1, 1->0, 1->2, 2->1
        let ds = Dataset::from_points(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let mut g = ProximityGraph::new(3, 1).unwrap();
        g.set_out_neighbors(0, vec![1]).unwrap();
        g.set_out_neighbors(1, vec![0, 2]).unwrap();
        g.set_out_neighbors(2, vec![1]).unwrap();
        // non-edge (0,2): ratio 3/2 via witness 1; non-edge (2,0): 3/1
        let rep = audit_reachability(&g, &ds);
        assert_eq!(rep.alpha_star, 1.5);
        assert_eq!(rep.worst_pair, Some((0, 2)));
        assert_eq!(rep.witness, Some(1));
    }

    #[test]
    fn empty_out_list_forces_zero() {
        let ds = Dataset::from_points(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let mut g = ProximityGraph::new(3, 0).unwrap();
        g.set_out_neighbors(1, vec![0, 2]).unwrap();
        g.set_out_neighbors(2, vec![0]).unwrap();
        let rep = audit_reachability(&g, &ds);
        assert_eq!(rep.alpha_star, 0.0);
        assert_eq!(rep.worst_pair, Some((0, 1)));
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn slow_build_is_alpha_reachable() {
        let ds = gen_random_dataset(120, 3, 2, RandomDist::UniformCube).unwrap();
        let g = build_slow(&ds, 1.7).unwrap();
        let rep = audit_reachability(&g, &ds);
        assert!(rep.alpha_star >= 1.7);
    }

    #[test]
    fn modes_agree() {
        let ds = gen_random_dataset(80, 3, 5, RandomDist::Gaussian).unwrap();
        let g = build_slow(&ds, 1.3).unwrap();
        let a = audit_reachability_with_mode(&g, &ds, ExecMode::Sequential);
        let b = audit_reachability_with_mode(&g, &ds, ExecMode::Parallel);
        assert_eq!(a, b);
    }
}
