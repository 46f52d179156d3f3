use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linear::{scales_from_residuals, weighted_gram, weighted_sum, PartialStats, UpdateKind};
use crate::objective::CostFn;
use crate::shard::Shard;

/// Per-datum offsets and signs that turn class `y`'s block into a hinge problem.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinaryReduction {
    /// `ρ_d = ζ_d(y) − Δ_d(y)`, `ζ_d(y) = max_{y′≠y} (s_{dy′} + Δ_d(y′))`.
    pub rho: Vec<f64>,
    /// `+1` when `y` is the datum's class, `−1` otherwise.
    pub beta: Vec<f64>,
}

impl BinaryReduction {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Builds the reduction for class `y` from row-major scores (`m` per datum)
/// and 0-based true classes.
pub fn compute_reduction(scores: &[f64], truth: &[usize], m: usize, y: usize, cost: &dyn CostFn) -> Result<BinaryReduction> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!("multiclass needs at least 2 classes, got {m}")));
    }
    if y >= m || scores.len() != truth.len() * m {
        return Err(Error::Precondition(format!(
            "class {y} of {m} with {} scores for {} data",
            scores.len(),
            truth.len()
        )));
    }
    let mut out = BinaryReduction {
        rho: Vec::with_capacity(truth.len()),
        beta: Vec::with_capacity(truth.len()),
    };
    for (s, &t) in scores.chunks_exact(m).zip(truth) {
        let zeta = s
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != y)
            .map(|(c, &v)| v + cost.cost(t, c))
            .fold(f64::NEG_INFINITY, f64::max);
        out.rho.push(zeta - cost.cost(t, y));
        out.beta.push(if t == y { 1.0 } else { -1.0 });
    }
    Ok(out)
}

fn check(shard: &Shard<'_>, reduction: &BinaryReduction) -> Result<()> {
    if reduction.len() != shard.len() || reduction.beta.len() != shard.len() {
        return Err(Error::Precondition(format!(
            "reduction of {} data for a shard of {}",
            reduction.len(),
            shard.len()
        )));
    }
    Ok(())
}

/// Scales from residuals `ρ_d − w_y·x_d`.
pub fn update_scales_mlt(
    w_y: &[f64],
    reduction: &BinaryReduction,
    shard: &Shard<'_>,
    mut kind: UpdateKind<'_>,
    floor: f64,
) -> Result<Vec<f64>> {
    check(shard, reduction)?;
    let mut out = Vec::with_capacity(shard.len());
    let residuals = shard.rows.iter().zip(&reduction.rho).map(|(x, r)| r - x.dot(w_y));
    scales_from_residuals(residuals, &mut kind, floor, &mut out)?;
    Ok(out)
}

/// `μᵖ = Σ_d (ρ_d/γ_d + β_d) x_d`, `Σᵖ = Σ_d (1/γ_d) x_d x_dᵀ`.
pub fn local_stats_mlt(shard: &Shard<'_>, reduction: &BinaryReduction, gamma: &[f64]) -> Result<PartialStats> {
    check(shard, reduction)?;
    if gamma.len() != shard.len() {
        return Err(Error::Precondition(format!(
            "gamma has {} entries for a shard of {}",
            gamma.len(),
            shard.len()
        )));
    }
    let dim = shard.rows.first().map_or(0, |r| r.dim());
    Ok(PartialStats {
        mu: mlt_mu(shard, reduction, gamma, dim),
        sigma: weighted_gram(shard.rows, dim, |d| 1.0 / gamma[d]),
        count: shard.len(),
    })
}

pub(crate) fn mlt_mu(shard: &Shard<'_>, reduction: &BinaryReduction, gamma: &[f64], dim: usize) -> Vec<f64> {
    weighted_sum(shard.rows, dim, |d| reduction.rho[d] / gamma[d] + reduction.beta[d])
}
