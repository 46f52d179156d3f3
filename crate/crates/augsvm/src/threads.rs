//! One OS thread per rank.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use augsvm_core::runtime::WorkerFault;
use augsvm_core::{Executor, Result};

/// Runs each rank's task on its own scoped thread; rank 0 uses the caller's.
///
/// A panicking task is reported as [`WorkerFault::Panicked`] for its rank
/// once every other task has finished.
#[derive(Debug, Clone, Copy)]
pub struct ThreadExecutor {
    origin: Instant,
}

impl Default for ThreadExecutor {
    fn default() -> Self {
        Self::new()
    }
}

impl ThreadExecutor {
    pub fn new() -> Self {
        Self { origin: Instant::now() }
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

impl Executor for ThreadExecutor {
    fn now(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }

    fn run<C, T, F>(&self, items: &mut [C], task: F) -> std::result::Result<Vec<T>, (usize, WorkerFault)>
    where
        C: Send,
        T: Send,
        F: Fn(usize, &mut C) -> Result<T> + Sync,
    {
        let task = &task;
        let guarded = |rank: usize, item: &mut C| -> std::result::Result<T, WorkerFault> {
            match catch_unwind(AssertUnwindSafe(|| task(rank, item))) {
                Ok(Ok(v)) => Ok(v),
                Ok(Err(e)) => Err(WorkerFault::Failed(e)),
                Err(p) => Err(WorkerFault::Panicked(panic_message(p))),
            }
        };
        let results: Vec<std::result::Result<T, WorkerFault>> = std::thread::scope(|scope| {
            let mut it = items.iter_mut().enumerate();
            let first = it.next();
            let handles: Vec<_> = it
                .map(|(rank, item)| scope.spawn(move || guarded(rank, item)))
                .collect();
            let mut out = Vec::with_capacity(handles.len() + 1);
            if let Some((rank, item)) = first {
                out.push(guarded(rank, item));
            }
            for h in handles {
                out.push(h.join().unwrap_or_else(|p| Err(WorkerFault::Panicked(panic_message(p)))));
            }
            out
        });
        results
            .into_iter()
            .enumerate()
            .map(|(rank, r)| r.map_err(|f| (rank, f)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use augsvm_core::Error;

    #[test]
    fn results_in_rank_order() {
        let mut items: Vec<usize> = (0..6).collect();
        let out = ThreadExecutor::new()
            .run(&mut items, |rank, x| {
                *x += 10;
                Ok(rank * 100 + *x)
            })
            .unwrap();
        assert_eq!(out, vec![10, 111, 212, 313, 414, 515]);
        assert_eq!(items, vec![10, 11, 12, 13, 14, 15]);
    }

    #[test]
    fn lowest_failing_rank_reported() {
        let mut items = vec![(); 5];
        let err = ThreadExecutor::new()
            .run(&mut items, |rank, _| {
                if rank >= 3 {
                    Err(Error::InvalidParameter(format!("r{rank}")))
                } else {
                    Ok(())
                }
            })
            .unwrap_err();
        assert_eq!(err.0, 3);
        assert!(matches!(err.1, WorkerFault::Failed(Error::InvalidParameter(ref m)) if m == "r3"));
    }

    #[test]
    fn panics_are_caught() {
        let mut items = vec![(); 3];
        let err = ThreadExecutor::new()
            .run(&mut items, |rank, _| -> Result<()> {
                if rank == 1 {
                    panic!("boom");
                }
                Ok(())
            })
            .unwrap_err();
        assert_eq!(err.0, 1);
        assert!(matches!(err.1, WorkerFault::Panicked(ref m) if m == "boom"));
        // rank 0 runs on the caller
        let err = ThreadExecutor::new()
            .run(&mut items, |rank, _| -> Result<()> {
                if rank == 0 {
                    panic!("first");
                }
                Ok(())
            })
            .unwrap_err();
        assert_eq!(err.0, 0);
    }

    #[test]
    fn clock_advances() {
        let e = ThreadExecutor::new();
        let a = e.now();
        std::thread::sleep(std::time::Duration::from_millis(2));
        assert!(e.now() > a);
    }
}
