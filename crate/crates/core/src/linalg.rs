//! Dense helpers: packed symmetric storage and a few vector kernels.

use alloc::vec;
use alloc::vec::Vec;

use crate::data::SparseRow;
use crate::error::{Error, Result};

/// A symmetric matrix stored as its upper triangle, packed row-major over
/// `(i, j)` with `i <= j`. Row `i` holds columns `i..n` contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangle {
    n: usize,
    data: Vec<f64>,
}

/// Number of stored entries for an `n x n` symmetric matrix.
pub const fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl UpperTriangle {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; packed_len(n)],
        }
    }

    pub fn identity(n: usize, scale: f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            *t.get_mut(i, i) = scale;
        }
        t
    }

    pub fn from_packed(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != packed_len(n) {
            return Err(Error::DimensionMismatch {
                expected: packed_len(n),
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    /// Builds the triangle from a full row-major matrix, reading only `j >= i`.
    pub fn from_full(n: usize, full: &[f64]) -> Result<Self> {
        if full.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: full.len(),
            });
        }
        let mut data = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            data.extend_from_slice(&full[i * n + i..(i + 1) * n]);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // offset of row i is sum_{r<i} (n - r) = i*n - i*(i-1)/2
        i * self.n - i * (i + 1) / 2 + j
    }

    /// Entry `(i, j)`; symmetric access.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    /// Contiguous slice of row `i`, columns `i..n`.
    pub fn row(&self, i: usize) -> &[f64] {
        let start = self.index(i, i);
        &self.data[start..start + (self.n - i)]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let start = self.index(i, i);
        let n = self.n;
        &mut self.data[start..start + (n - i)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Full row-major copy with the lower triangle mirrored.
    pub fn to_full(&self) -> Vec<f64> {
        let n = self.n;
        let mut full = vec![0.0; n * n];
        for i in 0..n {
            for (k, &v) in self.row(i).iter().enumerate() {
                let j = i + k;
                full[i * n + j] = v;
                full[j * n + i] = v;
            }
        }
        full
    }

    /// Elementwise `self += other`.
    pub fn add_assign(&mut self, other: &UpperTriangle) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        add_into(&mut self.data, &other.data);
        Ok(())
    }

    /// `self += c * x x^T` for a sparse row (upper triangle only).
    pub fn add_outer_sparse(&mut self, c: f64, x: &SparseRow) {
        let idx = x.indices();
        let val = x.values();
        for a in 0..idx.len() {
            let i = idx[a];
            let ci = c * val[a];
            let row = self.row_mut(i);
            for b in a..idx.len() {
                row[idx[b] - i] += ci * val[b];
            }
        }
    }

    /// `self += c * x x^T` for a dense vector (upper triangle only).
    pub fn add_outer_dense(&mut self, c: f64, x: &[f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let ci = c * x[i];
            if ci == 0.0 {
                continue;
            }
            let row = self.row_mut(i);
            for (r, &xj) in row.iter_mut().zip(&x[i..]) {
                *r += ci * xj;
            }
        }
    }

    /// `self += c * S` where `S` is given as a full row-major symmetric matrix.
    pub fn add_scaled_full(&mut self, c: f64, full: &[f64]) {
        let n = self.n;
        for i in 0..n {
            let src = &full[i * n + i..(i + 1) * n];
            for (r, &s) in self.row_mut(i).iter_mut().zip(src) {
                *r += c * s;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Dense dot product in index order.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// `acc += x` elementwise.
#[inline]
pub fn add_into(acc: &mut [f64], x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// `acc += c * x` for a sparse row.
#[inline]
pub fn axpy_sparse(acc: &mut [f64], c: f64, x: &SparseRow) {
    for (i, v) in x.iter() {
        acc[i] += c * v;
    }
}

/// Largest absolute row sum of a full row-major matrix.
pub fn inf_norm(n: usize, full: &[f64]) -> f64 {
    (0..n)
        .map(|i| full[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
