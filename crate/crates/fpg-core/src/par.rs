//! Parallel execution of independent work items (suite cells, seed runs).
//!
//! With the `parallel` feature (the default) items run on a rayon thread
//! pool; without it the same API degrades to a sequential loop. Both paths
//! preserve input order, and because every work item owns its state, results
//! are identical regardless of the backend or worker count.

/// True when this build executes work items on a thread pool.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Apply `f` to every item, returning results in input order.
/// `workers` caps the thread count; 0 means the backend default. The
/// sequential build ignores `workers`.
#[cfg(feature = "parallel")]
pub fn map_items<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    pool.install(|| items.into_par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<T, R, F>(items: Vec<T>, _workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Sequential reference path, available in every build (the benchmark suite
/// compares it against `map_items`).
pub fn map_sequential<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}
