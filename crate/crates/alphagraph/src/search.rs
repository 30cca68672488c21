//! Best-first graph search with a bounded candidate list, exact brute-force
//! ground truth, and recall.

use crate::dataset::{point_distance_sq, Dataset, MetricKind};
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::graph::ProximityGraph;

/// A search query: arbitrary coordinates in Euclidean mode, or a dataset
/// index in either mode (matrix-form datasets carry no out-of-sample
/// distances).
#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Point(&'a [f64]),
    Index(usize),
}

/// Output of one graph search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Closest `k` reached points, ascending distance to the query, ties
    /// by index.
    pub top_k: Vec<usize>,
    /// Every vertex whose out-list was expanded, in visit order.
    pub visited: Vec<usize>,
    /// Iterations of the main loop; equals `visited.len()`.
    pub hops: usize,
}

#[inline]
fn query_cmp_distance(ds: &Dataset, q: &Query, i: usize) -> f64 {
    match q {
        Query::Point(c) => point_distance_sq(c, ds.point(i)),
        Query::Index(j) => ds.cmp_distance(*j, i),
    }
}

/// True distance from a query to dataset point `i`.
pub fn query_distance(ds: &Dataset, q: &Query, i: usize) -> f64 {
    match q {
        Query::Point(c) => point_distance_sq(c, ds.point(i)).sqrt(),
        Query::Index(j) => ds.distance(*j, i),
    }
}

fn validate_query(ds: &Dataset, q: &Query) -> Result<()> {
    match q {
        Query::Point(c) => match ds.metric() {
            MetricKind::Euclidean => {
                let dim = ds.dim().expect("euclidean dataset has a dimension");
                if c.len() != dim {
                    return Err(Error::DimensionMismatch {
                        query: c.len(),
                        dataset: dim,
                    });
                }
                Ok(())
            }
            MetricKind::General => Err(Error::InvalidParams(
                "matrix-form datasets only support index queries".into(),
            )),
        },
        Query::Index(j) => {
            if *j >= ds.n() {
                return Err(Error::IndexOutOfRange { index: *j, n: ds.n() });
            }
            Ok(())
        }
    }
}

/// Best-first search from the graph's start vertex.
///
/// The candidate list is seeded with the start vertex; each iteration
/// expands the closest unvisited candidate, unions its out-neighbors into
/// the list, and truncates the list to the `l` entries closest to the
/// query. Terminates when every list entry has been visited. Visited
/// membership is tracked separately, so truncated-and-readded vertices are
/// never expanded twice.
pub fn greedy_search(
    g: &ProximityGraph,
    ds: &Dataset,
    query: Query,
    k: usize,
    l: usize,
) -> Result<SearchResult> {
    if k > l {
        return Err(Error::KExceedsL { k, l });
    }
    if g.n() != ds.n() {
        return Err(Error::InvalidParams(
            "graph and dataset sizes differ".into(),
        ));
    }
    validate_query(ds, &query)?;

    let n = g.n();
    let start = g.start();
    let mut in_list = vec![false; n];
    let mut visited_flag = vec![false; n];
    let mut list: Vec<(f64, usize)> = Vec::with_capacity(l + 1);
    list.push((query_cmp_distance(ds, &query, start), start));
    in_list[start] = true;
    let mut visited = Vec::new();

    loop {
        let Some(&(_, p_star)) = list.iter().find(|&&(_, id)| !visited_flag[id]) else {
            break;
        };
        visited_flag[p_star] = true;
        visited.push(p_star);
        for &nbr in g.out_neighbors(p_star) {
            if !in_list[nbr] {
                let d = query_cmp_distance(ds, &query, nbr);
                let pos = list.partition_point(|&(dd, ii)| dd < d || (dd == d && ii < nbr));
                list.insert(pos, (d, nbr));
                in_list[nbr] = true;
            }
        }
        while list.len() > l {
            let (_, dropped) = list.pop().expect("list non-empty");
            in_list[dropped] = false;
        }
    }

    let hops = visited.len();
    let top_k = list.iter().take(k).map(|&(_, id)| id).collect();
    Ok(SearchResult {
        top_k,
        visited,
        hops,
    })
}

/// Exact k-nearest-neighbor ground truth by full scan, ties by index.
pub fn brute_force_knn(ds: &Dataset, queries: &[Query], k: usize) -> Result<Vec<Vec<usize>>> {
    brute_force_knn_with_mode(ds, queries, k, ExecMode::default())
}

pub fn brute_force_knn_with_mode(
    ds: &Dataset,
    queries: &[Query],
    k: usize,
    mode: ExecMode,
) -> Result<Vec<Vec<usize>>> {
    if k > ds.n() {
        return Err(Error::InvalidParams(format!(
            "k = {} exceeds dataset size {}",
            k,
            ds.n()
        )));
    }
    for q in queries {
        validate_query(ds, q)?;
    }
    Ok(map_indices(queries.len(), mode, |qi| {
        let q = &queries[qi];
        let mut scored: Vec<(f64, usize)> = (0..ds.n())
            .map(|i| (query_cmp_distance(ds, q, i), i))
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        scored.into_iter().take(k).map(|(_, i)| i).collect()
    }))
}

/// Fraction of the true top-k contained in the returned top-k.
pub fn recall_at_k(result: &[usize], truth: &[usize], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("recall needs k >= 1".into()));
    }
    let truth_k: std::collections::HashSet<usize> =
        truth.iter().take(k).copied().collect();
    let hits = result
        .iter()
        .take(k)
        .filter(|i| truth_k.contains(i))
        .count();
    Ok(hits as f64 / k as f64)
}
