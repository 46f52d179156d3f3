//! Learned models and prediction.

use alloc::vec::Vec;

use crate::config::Solver;
use crate::data::{Dataset, SparseRow, Task};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    /// One weight per feature (bias column included).
    Linear(Vec<f64>),
    /// Coefficients over the retained training rows.
    Kernel {
        omega: Vec<f64>,
        support: Dataset,
        kernel: KernelSpec,
    },
    /// One weight vector per class, class order 1..=M.
    Multiclass(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub task: Task,
    pub lambda: f64,
    pub epsilon: f64,
    pub add_bias: bool,
    /// Feature count including the bias column.
    pub dim: usize,
    pub weights: Weights,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    /// +1 or -1.
    Binary(i8),
    Real(f64),
    /// 1-based class label.
    Class(usize),
}

impl Prediction {
    pub fn as_f64(self) -> f64 {
        match self {
            Prediction::Binary(s) => s as f64,
            Prediction::Real(v) => v,
            Prediction::Class(c) => c as f64,
        }
    }
}

impl Model {
    pub fn solver(&self) -> Solver {
        match self.weights {
            Weights::Kernel { .. } => Solver::Krn,
            _ => Solver::Lin,
        }
    }

    /// Checks shape and finiteness of the payload against the header fields.
    pub fn validate(&self) -> Result<()> {
        let check = |w: &[f64]| -> Result<()> {
            if w.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: w.len(),
                });
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("model weights"));
            }
            Ok(())
        };
        match &self.weights {
            Weights::Linear(w) => {
                if self.task == Task::Mlt {
                    return Err(Error::Precondition("linear weights for a multiclass task".into()));
                }
                check(w)
            }
            Weights::Multiclass(ws) => {
                if self.task != Task::Mlt {
                    return Err(Error::Precondition("class weights for a non-multiclass task".into()));
                }
                ws.iter().try_for_each(|w| check(w))
            }
            Weights::Kernel { omega, support, .. } => {
                if self.task != Task::Cls {
                    return Err(Error::Precondition("kernel model for a non-binary task".into()));
                }
                if omega.len() != support.len() {
                    return Err(Error::DimensionMismatch {
                        expected: support.len(),
                        found: omega.len(),
                    });
                }
                if support.dim() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: support.dim(),
                    });
                }
                if omega.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("kernel coefficients"));
                }
                Ok(())
            }
        }
    }

    /// Raw decision value(s): `w·x` for linear, `Σ ω_d k(x_d, x)` for kernel.
    pub fn decision(&self, x: &SparseRow) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        match &self.weights {
            Weights::Linear(w) => Ok(x.dot(w)),
            Weights::Kernel { omega, support, kernel } => {
                let mut s = 0.0;
                for (xd, &o) in support.rows().iter().zip(omega) {
                    s += o * kernel.eval(xd, x)?;
                }
                Ok(s)
            }
            Weights::Multiclass(_) => Err(Error::Precondition("multiclass models have per-class scores".into())),
        }
    }
}

/// Index of the largest score, ties going to the lowest index.
pub(crate) fn argmax_lowest(scores: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_s = f64::NEG_INFINITY;
    for (i, s) in scores.enumerate() {
        if s > best_s {
            best = i;
            best_s = s;
        }
    }
    best
}

#[inline]
pub(crate) fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Predicts one row. Zero decision values map to +1.
pub fn predict(model: &Model, x: &SparseRow) -> Result<Prediction> {
    if x.dim() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            found: x.dim(),
        });
    }
    match (&model.weights, model.task) {
        (Weights::Multiclass(ws), _) => Ok(Prediction::Class(argmax_lowest(ws.iter().map(|w| x.dot(w))) + 1)),
        (_, Task::Svr) => Ok(Prediction::Real(model.decision(x)?)),
        _ => Ok(Prediction::Binary(sign(model.decision(x)?))),
    }
}
