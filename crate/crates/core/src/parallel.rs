//! Worker-count control.
//!
//! Parallel code in this crate uses rayon's ambient pool. Work is always cut
//! into a fixed number of pieces that does not depend on the thread count, and
//! partial results merge by commutative operations (set union, integer sum), so
//! output is identical for any number of workers.

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SPECTRA_WORKERS";

/// Reads the worker count from `SPECTRA_WORKERS`, if set to a positive integer.
pub fn default_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the ambient pool for `None`.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
