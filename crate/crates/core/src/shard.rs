//! Contiguous, balanced shards of a dataset.

use alloc::vec::Vec;
use core::ops::Range;

use crate::data::{Dataset, SparseRow};
use crate::error::{Error, Result};

/// Read-only view of the rows assigned to one worker.
#[derive(Debug, Clone, Copy)]
pub struct Shard<'a> {
    pub rank: usize,
    pub rows: &'a [SparseRow],
    pub labels: &'a [f64],
    /// Global index of the first row.
    pub offset: usize,
}

impl<'a> Shard<'a> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Global datum indices covered by this shard.
    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.rows.len()
    }
}

/// Row ranges for `n` rows over `workers` shards: the first `n mod P` shards
/// get `⌈n/P⌉` rows, the rest `⌊n/P⌋`.
pub fn partition_ranges(n: usize, workers: usize) -> Result<Vec<Range<usize>>> {
    if workers == 0 || workers > n {
        return Err(Error::Partition { rows: n, workers });
    }
    let base = n / workers;
    let extra = n % workers;
    let mut start = 0;
    Ok((0..workers)
        .map(|p| {
            let len = base + usize::from(p < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect())
}

/// Splits `data` into `workers` contiguous shards.
pub fn partition(data: &Dataset, workers: usize) -> Result<Vec<Shard<'_>>> {
    Ok(partition_ranges(data.len(), workers)?
        .into_iter()
        .enumerate()
        .map(|(rank, r)| Shard {
            rank,
            rows: &data.rows()[r.clone()],
            labels: &data.labels()[r.clone()],
            offset: r.start,
        })
        .collect())
}
