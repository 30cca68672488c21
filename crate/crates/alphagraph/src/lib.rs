//! alphagraph: build, search, tune and audit alpha-reachable proximity
//! graphs for approximate nearest-neighbor search.
//!
//! The index is a directed graph over a point set. Construction prunes
//! candidate edges with a reachability parameter alpha; searching walks
//! the graph greedily with a bounded candidate list. The crate provides:
//!
//! - [`build::build_slow`], the O(n^3) construction whose output is
//!   alpha-reachable by construction, and [`build::build_vamana`], the
//!   practical degree-capped two-pass heuristic;
//! - [`prune::rp_tuning`], which re-targets an existing index to a
//!   smaller alpha by repruning every out-list in place instead of
//!   rebuilding;
//! - [`analysis`]: an exact reachability auditor, closed-form worst-case
//!   bounds for tuned graphs, extremal point configurations attaining
//!   them, and a randomized verifier for the Euclidean optimum;
//! - [`search`]: greedy beam search, brute-force ground truth, recall;
//! - [`bench`]: prune-vs-rebuild experiments with recall/QPS sweeps;
//! - [`io`]: fvecs/bvecs/ivecs ingestion and index persistence.
//!
//! Heavy per-vertex and per-query loops run on rayon when the `parallel`
//! feature (default) is enabled; every parallel pass is a deterministic
//! map over indices, so results never depend on thread scheduling.

pub mod analysis;
pub mod bench;
pub mod build;
pub mod dataset;
mod error;
mod exec;
pub mod graph;
pub mod io;
pub mod prune;
pub mod search;

pub use dataset::{
    gen_jittered_queries, gen_random_dataset, gen_random_queries, AspectRatio, Dataset,
    MetricKind, RandomDist,
};
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use graph::{DegreeStats, ProximityGraph};
pub use prune::{robust_prune, rp_tuning, DegreeBound, PruneParams};
pub use search::{brute_force_knn, greedy_search, recall_at_k, Query, SearchResult};
