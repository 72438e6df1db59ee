//! Execution helpers shared by every data-parallel loop in the crate.
//!
//! With the `parallel` feature (default) the work runs on a rayon pool; without
//! it the same helpers degrade to plain sequential iteration. Callers always
//! receive results in input order and perform any reduction sequentially over
//! that order, so outputs are bit-identical for any thread count, including
//! the sequential build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runs `f` inside a pool with exactly `threads` worker threads.
///
/// Every parallel helper in this module uses the pool that is current when it
/// is called, so wrapping an entry point in `run_with_threads` pins the
/// parallelism of everything beneath it. Without the `parallel` feature the
/// thread count is ignored and `f` runs on the calling thread.
#[cfg(feature = "parallel")]
pub fn run_with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build thread pool");
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

/// Maps `f` over `items`, returning outputs in input order.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    items
        .par_iter()
        .enumerate()
        .map(|(i, item)| f(i, item))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    items
        .iter()
        .enumerate()
        .map(|(i, item)| f(i, item))
        .collect()
}

/// Sequential reference implementation of [`map_ordered`], always compiled.
/// The benches use it as the baseline lane regardless of enabled features.
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    items
        .iter()
        .enumerate()
        .map(|(i, item)| f(i, item))
        .collect()
}
