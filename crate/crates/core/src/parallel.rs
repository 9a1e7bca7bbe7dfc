//! Worker pool shared by scans and probes.
//!
//! `SUNIDYN_THREADS` caps the number of workers; unset or unparsable means
//! one worker per available core.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub const THREADS_ENV: &str = "SUNIDYN_THREADS";

fn configured_threads() -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(cores, |n| n.min(cores.max(1)))
}

/// The process-wide pool, built on first use.
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        ThreadPoolBuilder::new()
            .num_threads(configured_threads())
            .thread_name(|i| format!("sunidyn-{i}"))
            .build()
            .expect("failed to build worker pool")
    })
}
