//! Worker pool for exhaustive scans.
//!
//! The pool size comes from `BQ_WORKERS` (default 1). Results are always
//! collected in input order, so output never depends on scheduling.

use std::sync::OnceLock;

use rayon::prelude::*;

pub const WORKERS_ENV: &str = "BQ_WORKERS";

pub fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(1)
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers())
            .build()
            .expect("thread pool")
    })
}

/// Ordered parallel `filter_map` over `0..n`.
pub(crate) fn scan<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    if workers() == 1 {
        return (0..n).filter_map(f).collect();
    }
    pool().install(|| (0..n).into_par_iter().filter_map(f).collect())
}
