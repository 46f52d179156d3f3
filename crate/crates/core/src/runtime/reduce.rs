use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linear::PartialStats;

/// Pairwise combining tree over ranks `0..P`.
///
/// Level 0 combines `(0,1), (2,3), …`; each later level combines neighbouring
/// survivors the same way, the left slot keeping the sum. The shape depends
/// only on `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducePlan {
    workers: usize,
    levels: Vec<Vec<(usize, usize)>>,
}

impl ReducePlan {
    pub fn new(workers: usize) -> Self {
        let mut levels = Vec::new();
        let mut alive: Vec<usize> = (0..workers).collect();
        while alive.len() > 1 {
            let pairs: Vec<(usize, usize)> = alive.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
            alive = alive.chunks(2).map(|c| c[0]).collect();
            levels.push(pairs);
        }
        Self { workers, levels }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// `(left, right)` pairs per level; the right operand is added into the left.
    pub fn levels(&self) -> &[Vec<(usize, usize)>] {
        &self.levels
    }

    /// Reduces any per-rank values with `combine(left, right)`.
    pub fn fold<T>(&self, items: Vec<T>, mut combine: impl FnMut(&mut T, T) -> Result<()>) -> Result<T> {
        if items.len() != self.workers || items.is_empty() {
            return Err(Error::Precondition(alloc::format!(
                "reduce plan for {} ranks given {} items",
                self.workers,
                items.len()
            )));
        }
        let mut slots: Vec<Option<T>> = items.into_iter().map(Some).collect();
        for level in &self.levels {
            for &(l, r) in level {
                let right = slots[r].take().expect("reduce plan reuses a slot");
                let left = slots[l].as_mut().expect("reduce plan reuses a slot");
                combine(left, right)?;
            }
        }
        Ok(slots[0].take().expect("rank 0 holds the result"))
    }
}

/// Sums per-rank statistics along `plan`.
pub fn reduce_stats(plan: &ReducePlan, partials: Vec<PartialStats>) -> Result<PartialStats> {
    plan.fold(partials, |acc, other| acc.merge(&other))
}
