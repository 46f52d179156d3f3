use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Why a worker did not return a result.
#[derive(Debug, Clone, PartialEq)]
pub enum WorkerFault {
    Failed(Error),
    Panicked(String),
}

/// Runs one task per worker and hands back the results in rank order.
///
/// Implementations choose the threading model; callers rely only on every
/// task having finished before `run` returns.
pub trait Executor: Sync {
    /// Seconds since some fixed origin, or 0 without a clock.
    fn now(&self) -> f64 {
        0.0
    }

    /// Runs `task(rank, &mut items[rank])` for every rank. On failure reports
    /// the lowest failing rank.
    fn run<C, T, F>(&self, items: &mut [C], task: F) -> core::result::Result<Vec<T>, (usize, WorkerFault)>
    where
        C: Send,
        T: Send,
        F: Fn(usize, &mut C) -> Result<T> + Sync;
}

/// Runs every task on the calling thread in rank order.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialExecutor {
    clock: Option<fn() -> f64>,
}

impl SerialExecutor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_clock(clock: fn() -> f64) -> Self {
        Self { clock: Some(clock) }
    }
}

impl Executor for SerialExecutor {
    fn now(&self) -> f64 {
        self.clock.map_or(0.0, |c| c())
    }

    fn run<C, T, F>(&self, items: &mut [C], task: F) -> core::result::Result<Vec<T>, (usize, WorkerFault)>
    where
        C: Send,
        T: Send,
        F: Fn(usize, &mut C) -> Result<T> + Sync,
    {
        items
            .iter_mut()
            .enumerate()
            .map(|(rank, item)| task(rank, item).map_err(|e| (rank, WorkerFault::Failed(e))))
            .collect()
    }
}
