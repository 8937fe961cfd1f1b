//! Worker pool for the frequency sweeps, capped by `TAILLAB_THREADS`.

use rayon::prelude::*;
use taillab_core::ilt::NodeMap;
use taillab_core::{Complex64 as C, Result};

use crate::error::Failure;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "TAILLAB_THREADS";

/// Evaluates Bromwich nodes on a rayon pool. Results keep node order, so the
/// output does not depend on the thread count.
pub struct RayonMap {
    pool: rayon::ThreadPool,
}

impl RayonMap {
    /// Pool with at most `cap` threads (`None`: all available cores).
    pub fn with_cap(cap: Option<usize>) -> std::result::Result<Self, Failure> {
        let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let n = cap.map_or(avail, |c| c.min(avail)).max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::validation(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool })
    }

    /// Pool honouring `TAILLAB_THREADS` (a positive integer) when set.
    pub fn from_env() -> std::result::Result<Self, Failure> {
        Self::with_cap(threads_from(std::env::var(THREADS_VAR).ok().as_deref())?)
    }

    /// Number of worker threads.
    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

/// Parse the `TAILLAB_THREADS` value.
pub fn threads_from(value: Option<&str>) -> std::result::Result<Option<usize>, Failure> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::validation(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

impl NodeMap for RayonMap {
    fn map_nodes(&self, nodes: &[C], f: &(dyn Fn(C) -> Result<C> + Sync)) -> Result<Vec<C>> {
        self.pool.install(|| nodes.par_iter().map(|&z| f(z)).collect())
    }
}
