//! Worker pools for data-parallel grid passes.
//!
//! Results are always collected in index order, so output never depends on
//! the number of workers.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "BIEBERBACH_THREADS";

pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` inside a pool of `threads` workers (`None`: [`worker_count`]).
pub fn install<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    let n = threads.unwrap_or_else(worker_count).max(1);
    match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
