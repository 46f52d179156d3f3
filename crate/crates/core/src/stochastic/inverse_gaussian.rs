use alloc::format;

use super::RngStream;
use crate::error::{Error, Result};

/// Inverse Gaussian distribution with mean `m` and shape `λ`
/// (variance `m³/λ`), sampled by transformation with one rejection step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseGaussian {
    mean: f64,
    shape: f64,
}

impl InverseGaussian {
    pub fn new(mean: f64, shape: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::InvalidParameter(format!("inverse Gaussian mean {mean} is not positive")));
        }
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::InvalidParameter(format!("inverse Gaussian shape {shape} is not positive")));
        }
        Ok(Self { mean, shape })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// The smaller root `x₁ ≤ m` of the transformed chi-square equation for
    /// the normal deviate `z`.
    ///
    /// Written as `4λ m a / (a + √(a² + 4λa))²` with `a = m z²`, which is the
    /// usual `m + m a/(2λ) − (m/2λ)√(4λa + a²)` without its cancellation for
    /// large means.
    #[inline]
    pub fn candidate(&self, z: f64) -> f64 {
        let (m, l) = (self.mean, self.shape);
        let a = m * z * z;
        if a == 0.0 {
            return m;
        }
        let root = a + libm::sqrt(a * a + 4.0 * l * a);
        4.0 * l * m * a / (root * root)
    }

    /// Keeps `x₁` with probability `m / (m + x₁)`, otherwise returns `m²/x₁`.
    #[inline]
    pub fn select(&self, x1: f64, u: f64) -> f64 {
        let m = self.mean;
        if u * (m + x1) <= m {
            x1
        } else {
            m * (m / x1)
        }
    }

    /// Deterministic draw from a normal deviate `z` and a uniform `u ∈ [0, 1)`.
    #[inline]
    pub fn from_deviates(&self, z: f64, u: f64) -> f64 {
        self.select(self.candidate(z), u)
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let z = rng.standard_normal();
        let u = rng.uniform();
        self.from_deviates(z, u)
    }
}

/// One draw from `IG(mean, shape)`.
pub fn draw_inverse_gaussian(mean: f64, shape: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(InverseGaussian::new(mean, shape)?.sample(rng))
}

/// Draws a latent scale `γ` whose reciprocal is `IG(1/|r|, 1)` for residual `r`,
/// clamping `|r|` and the result to at least `floor`.
#[inline]
pub fn draw_reciprocal_scale(residual: f64, floor: f64, rng: &mut RngStream) -> Result<f64> {
    if !residual.is_finite() {
        return Err(Error::NonFinite("residual"));
    }
    let ig = InverseGaussian::new(1.0 / residual.abs().max(floor), 1.0)?;
    Ok((1.0 / ig.sample(rng)).max(floor))
}
