use alloc::vec;
use alloc::vec::Vec;

use super::KernelSpec;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::runtime::{attribute, Executor};

/// Dense symmetric `N × N` kernel matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    data: Vec<f64>,
    kernel: KernelSpec,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row `K_i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Rows `range.start..range.end`, concatenated.
    pub fn rows(&self, range: core::ops::Range<usize>) -> &[f64] {
        &self.data[range.start * self.n..range.end * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `Kv`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| crate::linalg::dot(self.row(i), v)).collect()
    }
}

/// Evaluates `K_ij` for `i ≤ j`, rows dealt round-robin to `workers` ranks,
/// then copies each upper entry into the lower triangle.
pub fn build_gram<E: Executor>(
    data: &Dataset,
    kernel: KernelSpec,
    workers: usize,
    cap: usize,
    exec: &E,
) -> Result<GramMatrix> {
    kernel.validate()?;
    let n = data.len();
    if n > cap {
        return Err(Error::GramTooLarge { rows: n, cap });
    }
    if workers == 0 || workers > n {
        return Err(Error::Partition { rows: n, workers });
    }
    let rows = data.rows();
    let mut stripes: Vec<Vec<(usize, Vec<f64>)>> = vec![Vec::new(); workers];
    exec.run(&mut stripes, |rank, out| {
        for i in (rank..n).step_by(workers) {
            let mut r = Vec::with_capacity(n - i);
            for xj in &rows[i..] {
                r.push(kernel.eval(&rows[i], xj)?);
            }
            out.push((i, r));
        }
        Ok(())
    })
    .map_err(attribute(0))?;

    let mut full = vec![0.0; n * n];
    for (i, upper) in stripes.into_iter().flatten() {
        full[i * n + i..(i + 1) * n].copy_from_slice(&upper);
    }
    for i in 0..n {
        for j in 0..i {
            full[i * n + j] = full[j * n + i];
        }
    }
    Ok(GramMatrix { n, data: full, kernel })
}
