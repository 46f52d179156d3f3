use alloc::vec;
use alloc::vec::Vec;

use super::RngStream;
use crate::error::{Error, Result};
use crate::linalg::UpperTriangle;

/// A Gaussian in information form: precision `A` and `b = A μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionSystem {
    pub a: UpperTriangle,
    pub b: Vec<f64>,
}

impl PrecisionSystem {
    pub fn new(a: UpperTriangle, b: Vec<f64>) -> Result<Self> {
        if a.dim() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.len(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }
}

/// Lower Cholesky factor of `A + jitter·I`, stored dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
    jitter: f64,
}

impl Cholesky {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Row-major `n x n` lower factor; entries above the diagonal are zero.
    pub fn lower(&self) -> &[f64] {
        &self.l
    }

    /// Solves `L y = b` in place.
    pub fn forward(&self, y: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward(&self, x: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let xi = x[i] / self.l[i * n + i];
            x[i] = xi;
            // column i of L below the diagonal is row i of Lᵀ
            for k in 0..i {
                x[k] -= self.l[i * n + k] * xi;
            }
        }
    }

    /// Solves `(L Lᵀ) x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        x
    }
}

fn try_factor(a: &UpperTriangle, jitter: f64) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let (done, rest) = l.split_at_mut(j * n);
        let row_j = &mut rest[..n];
        for k in 0..j {
            // row_j[k] = (A[j][k] - Σ_{m<k} L[j][m] L[k][m]) / L[k][k]
            let row_k = &done[k * n..k * n + k + 1];
            let s: f64 = row_j[..k].iter().zip(&row_k[..k]).map(|(x, y)| x * y).sum();
            row_j[k] = (a.get(k, j) - s) / row_k[k];
        }
        let s: f64 = row_j[..j].iter().map(|v| v * v).sum();
        let d = a.get(j, j) + jitter - s;
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        row_j[j] = libm::sqrt(d);
    }
    Some(l)
}

/// Factors `A + jitter·I`, trying jitter `0, j₀, 10j₀, 100j₀` with
/// `j₀ = 1e-8 · trace(A)/n`.
pub fn cholesky_with_jitter(a: &UpperTriangle) -> Result<Cholesky> {
    let n = a.dim();
    if !a.is_finite() {
        return Err(Error::NonFinite("precision matrix"));
    }
    let j0 = if n == 0 { 0.0 } else { 1e-8 * a.trace() / n as f64 };
    let ladder = [0.0, j0, 10.0 * j0, 100.0 * j0];
    let mut tried = Vec::with_capacity(ladder.len());
    for &jitter in &ladder {
        if jitter < 0.0 || (jitter == 0.0 && !tried.is_empty()) {
            break;
        }
        tried.push(jitter);
        if let Some(l) = try_factor(a, jitter) {
            return Ok(Cholesky { n, l, jitter });
        }
    }
    Err(Error::NotPositiveDefinite { jitters: tried })
}

/// `μ = A⁻¹ b`.
pub fn solve_mean(sys: &PrecisionSystem) -> Result<Vec<f64>> {
    Ok(cholesky_with_jitter(&sys.a)?.solve(&sys.b))
}

/// `μ + L⁻ᵀ z` for a given factor, mean and noise vector.
pub fn draw_gaussian_with_noise(chol: &Cholesky, mean: &[f64], z: &[f64]) -> Vec<f64> {
    let mut v = z.to_vec();
    chol.backward(&mut v);
    mean.iter().zip(&v).map(|(m, e)| m + e).collect()
}

/// One draw from `N(A⁻¹b, A⁻¹)` without forming `A⁻¹`.
pub fn draw_gaussian_from_precision(sys: &PrecisionSystem, rng: &mut RngStream) -> Result<Vec<f64>> {
    let chol = cholesky_with_jitter(&sys.a)?;
    let mean = chol.solve(&sys.b);
    let z: Vec<f64> = (0..sys.dim()).map(|_| rng.standard_normal()).collect();
    Ok(draw_gaussian_with_noise(&chol, &mean, &z))
}
