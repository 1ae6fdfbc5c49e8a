//! Data-parallel execution helpers.
//!
//! With the `parallel` feature enabled (default) the indexed maps run on the
//! rayon pool; without it they degrade to plain sequential loops. Every
//! helper maps each index independently and collects in index order, so the
//! output is bit-identical regardless of worker count. The `_seq` variants
//! are always sequential and exist as the reference path for tests and for
//! the criterion benches comparing both.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `0..n` through `f`, in parallel when available.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential reference implementation of [`map_indexed`].
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Execution strategy selector used by the few entry points that expose an
/// explicit sequential fallback for benchmarking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    /// Parallel when compiled with the `parallel` feature.
    Auto,
    /// Force the sequential path.
    Sequential,
}

/// Map with an explicit strategy.
pub fn map_indexed_with<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Auto => map_indexed(n, f),
        ExecMode::Sequential => map_indexed_seq(n, f),
    }
}
