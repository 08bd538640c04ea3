//! Deterministic fan-out over independent work items.
//!
//! Results are collected in index order, so the parallel and sequential
//! paths produce identical output whenever each item is a pure function of
//! its index. Compiled without the `parallel` feature, the crate falls
//! back to the sequential path everywhere.

/// Apply `f` to `0..n`, in parallel when the `parallel` feature is active.
#[cfg(feature = "parallel")]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential reference path, available regardless of features so that
/// benchmarks and determinism tests can compare against it.
pub fn indexed_map_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
