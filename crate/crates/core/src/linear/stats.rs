use alloc::vec;
use alloc::vec::Vec;

use crate::data::SparseRow;
use crate::error::{Error, Result};
use crate::linalg::{add_into, axpy_sparse, UpperTriangle};
use crate::shard::Shard;

/// One worker's additive contribution: `μᵖ`, the upper triangle of `Σᵖ`,
/// and how many data went into them.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialStats {
    pub mu: Vec<f64>,
    pub sigma: UpperTriangle,
    pub count: usize,
}

impl PartialStats {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mu: vec![0.0; dim],
            sigma: UpperTriangle::zeros(dim),
            count: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// `self += other`, elementwise.
    pub fn merge(&mut self, other: &PartialStats) -> Result<()> {
        if self.dim() != other.dim() || self.sigma.dim() != other.sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        add_into(&mut self.mu, &other.mu);
        self.sigma.add_assign(&other.sigma)?;
        self.count += other.count;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.mu.iter().all(|v| v.is_finite()) && self.sigma.is_finite()
    }
}

/// `Σ_d c_d x_d` in ascending datum order.
pub fn weighted_sum(rows: &[SparseRow], dim: usize, coef: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    for (d, x) in rows.iter().enumerate() {
        axpy_sparse(&mut acc, coef(d), x);
    }
    acc
}

/// Upper triangle of `Σ_d c_d x_d x_dᵀ` in ascending datum order.
pub fn weighted_gram(rows: &[SparseRow], dim: usize, coef: impl Fn(usize) -> f64) -> UpperTriangle {
    let mut acc = UpperTriangle::zeros(dim);
    for (d, x) in rows.iter().enumerate() {
        acc.add_outer_sparse(coef(d), x);
    }
    acc
}

fn shard_dim(shard: &Shard<'_>) -> usize {
    shard.rows.first().map_or(0, |r| r.dim())
}

fn check_len(shard: &Shard<'_>, what: &str, len: usize) -> Result<()> {
    if len != shard.len() {
        return Err(Error::Precondition(alloc::format!(
            "{what} has {len} entries for a shard of {}",
            shard.len()
        )));
    }
    Ok(())
}

/// `Σ_d (1 + 1/γ_d) y_d x_d`.
pub fn local_mu_cls(shard: &Shard<'_>, gamma: &[f64]) -> Vec<f64> {
    weighted_sum(shard.rows, shard_dim(shard), |d| (1.0 + 1.0 / gamma[d]) * shard.labels[d])
}

/// `Σ_d (1/γ_d) x_d x_dᵀ`.
pub fn local_sigma_cls(shard: &Shard<'_>, gamma: &[f64]) -> UpperTriangle {
    weighted_gram(shard.rows, shard_dim(shard), |d| 1.0 / gamma[d])
}

pub fn local_stats_cls(shard: &Shard<'_>, gamma: &[f64]) -> Result<PartialStats> {
    check_len(shard, "gamma", gamma.len())?;
    Ok(PartialStats {
        mu: local_mu_cls(shard, gamma),
        sigma: local_sigma_cls(shard, gamma),
        count: shard.len(),
    })
}

/// `Σ_d ((y_d − ε)/γ_d + (y_d + ε)/ω_d) x_d`.
pub fn local_mu_svr(shard: &Shard<'_>, gamma: &[f64], omega: &[f64], epsilon: f64) -> Vec<f64> {
    weighted_sum(shard.rows, shard_dim(shard), |d| {
        let y = shard.labels[d];
        (y - epsilon) / gamma[d] + (y + epsilon) / omega[d]
    })
}

/// `Σ_d (1/γ_d + 1/ω_d) x_d x_dᵀ`.
pub fn local_sigma_svr(shard: &Shard<'_>, gamma: &[f64], omega: &[f64]) -> UpperTriangle {
    weighted_gram(shard.rows, shard_dim(shard), |d| 1.0 / gamma[d] + 1.0 / omega[d])
}

pub fn local_stats_svr(shard: &Shard<'_>, gamma: &[f64], omega: &[f64], epsilon: f64) -> Result<PartialStats> {
    check_len(shard, "gamma", gamma.len())?;
    check_len(shard, "omega", omega.len())?;
    Ok(PartialStats {
        mu: local_mu_svr(shard, gamma, omega, epsilon),
        sigma: local_sigma_svr(shard, gamma, omega),
        count: shard.len(),
    })
}
