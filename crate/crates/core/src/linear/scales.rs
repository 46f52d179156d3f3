use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shard::Shard;
use crate::stochastic::{draw_reciprocal_scale, RngStream};

/// How a conditional update is resolved: at its mode-like EM value or by a draw.
#[derive(Debug)]
pub enum UpdateKind<'r> {
    Em,
    Mc(&'r mut RngStream),
}

impl UpdateKind<'_> {
    pub fn reborrow(&mut self) -> UpdateKind<'_> {
        match self {
            UpdateKind::Em => UpdateKind::Em,
            UpdateKind::Mc(r) => UpdateKind::Mc(r),
        }
    }
}

/// Latent scales for the given residuals.
///
/// EM: `γ = max(floor, |r|)`. MC: `γ = max(floor, 1/v)` with
/// `v ~ IG(1/max(floor, |r|), 1)`.
pub fn scales_from_residuals<I>(residuals: I, kind: &mut UpdateKind<'_>, floor: f64, out: &mut Vec<f64>) -> Result<()>
where
    I: IntoIterator<Item = f64>,
{
    out.clear();
    for r in residuals {
        if !r.is_finite() {
            return Err(Error::NonFinite("residual"));
        }
        let g = match kind {
            UpdateKind::Em => r.abs().max(floor),
            UpdateKind::Mc(rng) => draw_reciprocal_scale(r, floor, rng)?,
        };
        out.push(g);
    }
    Ok(())
}

/// Scales for hinge loss; residual `1 − y_d w·x_d`.
pub fn update_scales_cls(w: &[f64], shard: &Shard<'_>, mut kind: UpdateKind<'_>, floor: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(shard.len());
    let residuals = shard.rows.iter().zip(shard.labels).map(|(x, &y)| 1.0 - y * x.dot(w));
    scales_from_residuals(residuals, &mut kind, floor, &mut out)?;
    Ok(out)
}

/// Scales for ε-insensitive loss: `γ` from `y − w·x − ε`, `ω` from `y − w·x + ε`.
pub fn update_scales_svr(
    w: &[f64],
    shard: &Shard<'_>,
    epsilon: f64,
    mut kind: UpdateKind<'_>,
    floor: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut gamma = Vec::with_capacity(shard.len());
    let mut omega = Vec::with_capacity(shard.len());
    let mut one = Vec::with_capacity(2);
    for (x, &y) in shard.rows.iter().zip(shard.labels) {
        let r = y - x.dot(w);
        scales_from_residuals([r - epsilon, r + epsilon], &mut kind, floor, &mut one)?;
        gamma.push(one[0]);
        omega.push(one[1]);
    }
    Ok((gamma, omega))
}
