//! Worker-count plumbing. Every parallel path in the crate produces results
//! that do not depend on the number of workers.

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ARCLEMMA_THREADS";

/// Worker count from `ARCLEMMA_THREADS`, defaulting to 1.
pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

/// Runs `f` inside a dedicated pool of `threads` workers. With one worker
/// the closure runs on the calling thread.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
