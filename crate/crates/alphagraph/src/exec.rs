//! Sequential/parallel execution of per-vertex and per-query loops.
//!
//! Every data-parallel pass in this crate maps an index range through a pure
//! function and collects the results in index order, so output is identical
//! regardless of thread scheduling. With the `parallel` feature disabled the
//! sequential path is the only one compiled.

/// How to run a data-parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Rayon work-stealing over the current global pool. Falls back to
    /// sequential when the `parallel` feature is off.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T, F>(n: usize, _mode: ExecMode, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
