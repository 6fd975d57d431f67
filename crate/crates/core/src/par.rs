//! Thin dispatch layer between the rayon-backed and sequential execution
//! paths.
//!
//! Every data-parallel kernel in the crate funnels through [`map_indexed`],
//! which collects `f(0), f(1), .., f(n-1)` in index order.  Results are
//! therefore identical regardless of scheduling.  The `*_serial` variant is
//! always compiled so benchmarks can compare the two paths side by side.

/// Map `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n` sequentially (the `parallel` feature is disabled).
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential reference version of [`map_indexed`], always available.
pub fn map_indexed_serial<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
