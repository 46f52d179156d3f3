//! Regularized risks monitored by every engine. All sums run in ascending datum order.

use crate::data::{Dataset, SparseRow, Task};
use crate::error::{Error, Result};
use crate::linalg::norm_sq;

/// Per-label misclassification cost for multiclass training.
///
/// `cost(t, t)` must be zero. Classes are 0-based.
pub trait CostFn: Sync {
    fn cost(&self, truth: usize, predicted: usize) -> f64;
}

/// 0 when the prediction is right, 1 otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOneCost;

impl CostFn for ZeroOneCost {
    #[inline]
    fn cost(&self, truth: usize, predicted: usize) -> f64 {
        if truth == predicted {
            0.0
        } else {
            1.0
        }
    }
}

fn check_weights(w: &[f64], dim: usize) -> Result<()> {
    if w.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: w.len(),
        });
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("weights"));
    }
    Ok(())
}

fn check_task(data: &Dataset, task: Task) -> Result<()> {
    if data.task() != task {
        return Err(Error::Precondition(alloc::format!(
            "expected a {} dataset, got {}",
            task.as_str(),
            data.task().as_str()
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn hinge(r: f64) -> f64 {
    if r > 0.0 {
        r
    } else {
        0.0
    }
}

/// `2 Σ max(0, 1 - y_d w·x_d)` over the given rows.
pub(crate) fn hinge_sum(w: &[f64], rows: &[SparseRow], labels: &[f64]) -> f64 {
    rows.iter()
        .zip(labels)
        .map(|(x, &y)| hinge(1.0 - y * x.dot(w)))
        .sum::<f64>()
        * 2.0
}

pub(crate) fn eps_sum(w: &[f64], rows: &[SparseRow], labels: &[f64], epsilon: f64) -> f64 {
    rows.iter()
        .zip(labels)
        .map(|(x, &y)| hinge((y - x.dot(w)).abs() - epsilon))
        .sum::<f64>()
        * 2.0
}

/// `(λ/2)‖w‖² + 2 Σ_d max(0, 1 − y_d w·x_d)`.
pub fn objective_cls(w: &[f64], data: &Dataset, lambda: f64) -> Result<f64> {
    check_task(data, Task::Cls)?;
    check_weights(w, data.dim())?;
    Ok(0.5 * lambda * norm_sq(w) + hinge_sum(w, data.rows(), data.labels()))
}

/// `(λ/2)‖w‖² + 2 Σ_d max(0, |y_d − w·x_d| − ε)`.
pub fn objective_svr(w: &[f64], data: &Dataset, lambda: f64, epsilon: f64) -> Result<f64> {
    check_task(data, Task::Svr)?;
    check_weights(w, data.dim())?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("epsilon {epsilon} is negative")));
    }
    Ok(0.5 * lambda * norm_sq(w) + eps_sum(w, data.rows(), data.labels(), epsilon))
}

/// Crammer–Singer loss of one datum given its class scores.
#[inline]
pub(crate) fn cs_loss(scores: &[f64], truth: usize, cost: &dyn CostFn) -> f64 {
    let own = scores[truth];
    scores
        .iter()
        .enumerate()
        .map(|(y, &s)| cost.cost(truth, y) + s - own)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(λ/2) Σ_y ‖w_y‖² + 2 Σ_d max_y (Δ_d(y) + w_y·x_d − w_{y_d}·x_d)`.
pub fn objective_mlt(weights: &[alloc::vec::Vec<f64>], data: &Dataset, lambda: f64, cost: &dyn CostFn) -> Result<f64> {
    check_task(data, Task::Mlt)?;
    let m = data.num_classes();
    if weights.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: weights.len(),
        });
    }
    for w in weights {
        check_weights(w, data.dim())?;
    }
    let reg: f64 = weights.iter().map(|w| norm_sq(w)).sum();
    let mut scores = alloc::vec![0.0; m];
    let mut loss = 0.0;
    for (d, x) in data.rows().iter().enumerate() {
        for (s, w) in scores.iter_mut().zip(weights) {
            *s = x.dot(w);
        }
        loss += cs_loss(&scores, data.class_of(d), cost);
    }
    Ok(0.5 * lambda * reg + 2.0 * loss)
}
