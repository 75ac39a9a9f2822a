//! Deterministic parallel execution.
//!
//! Work is cut into a fixed number of chunks by a [`Plan`]; chunk `c` always
//! draws from `base.child(c)` and results are combined in chunk order. The
//! number of worker threads therefore changes wall time only, never output.

use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::rng::RngStream;

pub const DEFAULT_CHUNKS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub chunks: usize,
}

impl Default for Plan {
    fn default() -> Self {
        Plan {
            chunks: DEFAULT_CHUNKS,
        }
    }
}

impl Plan {
    pub fn new(chunks: usize) -> Self {
        Plan {
            chunks: chunks.max(1),
        }
    }

    /// Number of items assigned to chunk `c` out of `total`.
    pub fn share(&self, total: u64, c: usize) -> u64 {
        let k = self.chunks as u64;
        total / k + u64::from((c as u64) < total % k)
    }
}

#[derive(Clone)]
pub struct Executor {
    workers: usize,
    pool: Option<Arc<ThreadPool>>,
    plan: Plan,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers)
            .field("plan", &self.plan)
            .finish()
    }
}

impl Default for Executor {
    fn default() -> Self {
        Executor::sequential()
    }
}

impl Executor {
    pub fn sequential() -> Self {
        Executor {
            workers: 1,
            pool: None,
            plan: Plan::default(),
        }
    }

    pub fn new(workers: usize, plan: Plan) -> Self {
        let workers = workers.max(1);
        let pool = (workers > 1).then(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("failed to build worker pool"),
            )
        });
        Executor {
            workers,
            pool,
            plan,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn plan(&self) -> Plan {
        self.plan
    }

    pub fn with_plan(&self, plan: Plan) -> Self {
        Executor {
            workers: self.workers,
            pool: self.pool.clone(),
            plan,
        }
    }

    /// Runs `f(chunk, share, stream)` for every chunk of the plan and returns
    /// the results in chunk order.
    pub fn map_chunks<T, F>(&self, total: u64, base: RngStream, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, u64, RngStream) -> T + Sync + Send,
    {
        let plan = self.plan;
        let job = |c: usize| f(c, plan.share(total, c), base.child(c as u64));
        match &self.pool {
            None => (0..plan.chunks).map(job).collect(),
            Some(pool) => pool.install(|| (0..plan.chunks).into_par_iter().map(job).collect()),
        }
    }
}
