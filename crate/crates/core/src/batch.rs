//! Independent-run batches (Monte Carlo repetitions, benchmark grids), run on
//! the rayon pool when the `parallel` feature is enabled and sequentially
//! otherwise. Results always come back in index order.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "MIRRORGATE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global pool.
    Parallel { threads: Option<usize> },
}

impl Execution {
    /// Parallel, capped by `MIRRORGATE_THREADS` when set; `MIRRORGATE_THREADS=1`
    /// means sequential.
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel { threads: None },
            Some(1) => Execution::Sequential,
            Some(k) => Execution::Parallel { threads: Some(k) },
        }
    }

    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..count).map(f)`, possibly in parallel.
pub fn map_indexed<T, F>(count: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        Execution::Parallel { threads } => par_map(count, threads, f),
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(count: u64, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let work = || (0..count).into_par_iter().map(&f).collect();
    match threads {
        None => work(),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(count: u64, _threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
