//! Fixtures and naive dense re-implementations shared by the integration tests.
#![allow(dead_code)]

use augsvm_core::stochastic::{Purpose, RngStream};
use augsvm_core::{Dataset, Model, SparseRow, Task};

pub fn rng(seed: u64) -> RngStream {
    RngStream::new(seed, 0, Purpose::Aux)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

/// Random dense values with roughly `density` of them nonzero.
pub fn random_rows(n: usize, k: usize, density: f64, r: &mut RngStream) -> Vec<SparseRow> {
    (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..k)
                .map(|_| if r.uniform() < density { r.standard_normal() } else { 0.0 })
                .collect();
            SparseRow::from_dense(&x)
        })
        .collect()
}

pub fn random_binary(n: usize, k: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let rows = random_rows(n, k, 0.7, &mut r);
    let labels = (0..n).map(|_| if r.uniform() < 0.5 { 1.0 } else { -1.0 }).collect();
    Dataset::new(rows, labels, Task::Cls, None, false).unwrap()
}

pub fn random_regression(n: usize, k: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let rows = random_rows(n, k, 0.7, &mut r);
    let labels = (0..n).map(|_| 2.0 * r.standard_normal()).collect();
    Dataset::new(rows, labels, Task::Svr, None, false).unwrap()
}

pub fn random_multiclass(n: usize, k: usize, m: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let rows = random_rows(n, k, 0.7, &mut r);
    let labels = (0..n).map(|d| (d % m + 1) as f64).collect();
    Dataset::new(rows, labels, Task::Mlt, Some(m), false).unwrap()
}

fn with_bias(x: Vec<f64>) -> SparseRow {
    let mut x = x;
    x.push(1.0);
    SparseRow::from_dense(&x)
}

/// Two Gaussian classes in `k` dimensions (plus bias), means `±sep` along the first axis.
pub fn blobs(n: usize, k: usize, sep: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for d in 0..n {
        let y = if d % 2 == 0 { 1.0 } else { -1.0 };
        let mut x: Vec<f64> = (0..k).map(|_| r.standard_normal()).collect();
        x[0] += y * sep;
        rows.push(with_bias(x));
        labels.push(y);
    }
    Dataset::new(rows, labels, Task::Cls, None, true).unwrap()
}

/// `m` unit-variance blobs on a circle of radius `radius` in the plane (plus bias).
pub fn class_blobs(n: usize, m: usize, radius: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for d in 0..n {
        let c = d % m;
        let a = 2.0 * std::f64::consts::PI * c as f64 / m as f64;
        rows.push(with_bias(vec![
            radius * a.cos() + r.standard_normal(),
            radius * a.sin() + r.standard_normal(),
        ]));
        labels.push((c + 1) as f64);
    }
    Dataset::new(rows, labels, Task::Mlt, Some(m), true).unwrap()
}

/// Interleaved half circles (plus bias).
pub fn moons(n: usize, noise: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for d in 0..n {
        let t = std::f64::consts::PI * r.uniform();
        let (x, y, lab) = if d % 2 == 0 {
            (t.cos(), t.sin(), 1.0)
        } else {
            (1.0 - t.cos(), 0.5 - t.sin(), -1.0)
        };
        rows.push(with_bias(vec![x + noise * r.standard_normal(), y + noise * r.standard_normal()]));
        labels.push(lab);
    }
    Dataset::new(rows, labels, Task::Cls, None, true).unwrap()
}

/// The four corners of the square; +1 where the coordinates share a sign.
pub fn xor() -> Dataset {
    let pts = [([1.0, 1.0], 1.0), ([-1.0, -1.0], 1.0), ([1.0, -1.0], -1.0), ([-1.0, 1.0], -1.0)];
    let rows = pts.iter().map(|(x, _)| with_bias(x.to_vec())).collect();
    let labels = pts.iter().map(|p| p.1).collect();
    Dataset::new(rows, labels, Task::Cls, None, true).unwrap()
}

pub fn accuracy(model: &Model, data: &Dataset) -> f64 {
    let hits = data
        .rows()
        .iter()
        .zip(data.labels())
        .filter(|(x, &y)| augsvm_core::predict(model, x).unwrap().as_f64() == y)
        .count();
    hits as f64 / data.len() as f64
}

pub fn dense(data: &Dataset) -> Vec<Vec<f64>> {
    data.rows().iter().map(|r| r.to_dense()).collect()
}

pub fn ddot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Full `k × k` matrix of `Σ c_d x_d x_dᵀ`, plus `Σ e_d x_d`.
pub fn dense_stats(x: &[Vec<f64>], c: impl Fn(usize) -> f64, e: impl Fn(usize) -> f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let k = x[0].len();
    let mut mu = vec![0.0; k];
    let mut s = vec![vec![0.0; k]; k];
    for (d, xd) in x.iter().enumerate() {
        for i in 0..k {
            mu[i] += e(d) * xd[i];
            for j in 0..k {
                s[i][j] += c(d) * xd[i] * xd[j];
            }
        }
    }
    (mu, s)
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut r = r.clone();
        r.push(v);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
        m.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..=n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Full-batch projected subgradient descent on `(λ/2)‖w‖² + 2Σ max(0, 1 − y w·x)`,
/// step `1/(λt)`, ball radius `2√(N/λ)`, averaging the second half of the iterates.
pub fn subgradient_oracle(data: &Dataset, lambda: f64, iters: usize) -> Vec<f64> {
    let x = dense(data);
    let k = data.dim();
    let radius = 2.0 * (data.len() as f64 / lambda).sqrt();
    let mut w = vec![0.0; k];
    let mut avg = vec![0.0; k];
    let mut count = 0.0;
    for t in 1..=iters {
        let mut g: Vec<f64> = w.iter().map(|v| lambda * v).collect();
        for (xd, &y) in x.iter().zip(data.labels()) {
            if y * ddot(xd, &w) < 1.0 {
                for (gi, xi) in g.iter_mut().zip(xd) {
                    *gi -= 2.0 * y * xi;
                }
            }
        }
        let eta = 1.0 / (lambda * t as f64);
        for (wi, gi) in w.iter_mut().zip(&g) {
            *wi -= eta * gi;
        }
        let norm = ddot(&w, &w).sqrt();
        if norm > radius {
            w.iter_mut().for_each(|v| *v *= radius / norm);
        }
        if t > iters / 2 {
            count += 1.0;
            for (a, wi) in avg.iter_mut().zip(&w) {
                *a += (wi - *a) / count;
            }
        }
    }
    avg
}

pub fn dense_hinge_objective(w: &[f64], x: &[Vec<f64>], y: &[f64], lambda: f64) -> f64 {
    let mut s = 0.5 * lambda * ddot(w, w);
    for (xd, yd) in x.iter().zip(y) {
        s += 2.0 * (1.0 - yd * ddot(xd, w)).max(0.0);
    }
    s
}
