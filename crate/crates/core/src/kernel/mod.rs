//! Kernel binary classifier over Gram-matrix coefficients `ω`.

mod gram;
mod train;

pub use gram::{build_gram, GramMatrix};
pub use train::{kernel_em_system, kernel_precision, krn_global_update, objective_krn, train_kernel, update_scales_krn};

use alloc::format;

use crate::data::SparseRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `exp(−‖x − z‖² / (2σ²))`.
    Gaussian { sigma: f64 },
    /// `x·z`. Mostly useful to compare against the linear solver.
    Linear,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidConfig(format!("kernel sigma must be positive, got {sigma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, a: &SparseRow, b: &SparseRow) -> Result<f64> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(match *self {
            KernelSpec::Gaussian { sigma } => libm::exp(-sq_distance(a, b) / (2.0 * sigma * sigma)),
            KernelSpec::Linear => sparse_dot(a, b),
        })
    }
}

/// `‖a − b‖²` by a merged walk over both index lists.
pub(crate) fn sq_distance(a: &SparseRow, b: &SparseRow) -> f64 {
    let (ai, av) = (a.indices(), a.values());
    let (bi, bv) = (b.indices(), b.values());
    let (mut i, mut j) = (0, 0);
    let mut s = 0.0;
    while i < ai.len() && j < bi.len() {
        let d = if ai[i] == bi[j] {
            let d = av[i] - bv[j];
            i += 1;
            j += 1;
            d
        } else if ai[i] < bi[j] {
            i += 1;
            av[i - 1]
        } else {
            j += 1;
            bv[j - 1]
        };
        s += d * d;
    }
    s += av[i..].iter().map(|v| v * v).sum::<f64>();
    s += bv[j..].iter().map(|v| v * v).sum::<f64>();
    s
}

pub(crate) fn sparse_dot(a: &SparseRow, b: &SparseRow) -> f64 {
    let (ai, av) = (a.indices(), a.values());
    let (bi, bv) = (b.indices(), b.values());
    let (mut i, mut j) = (0, 0);
    let mut s = 0.0;
    while i < ai.len() && j < bi.len() {
        if ai[i] == bi[j] {
            s += av[i] * bv[j];
            i += 1;
            j += 1;
        } else if ai[i] < bi[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    s
}
