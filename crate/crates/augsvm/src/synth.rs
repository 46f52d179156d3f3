//! Synthetic datasets for tests, benchmarks and the `generate` command.

use std::f64::consts::PI;

use augsvm_core::stochastic::{Purpose, RngStream};
use augsvm_core::{Dataset, SparseRow, Task};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub rows: usize,
    pub features: usize,
    /// 2 gives ±1 labels; more gives classes `1..=M`.
    pub classes: usize,
    /// Distance of each class mean from the origin.
    pub separation: f64,
    /// Probability that a feature entry is zeroed.
    pub sparsity: f64,
    pub noise: f64,
    pub add_bias: bool,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            rows: 1000,
            features: 2,
            classes: 2,
            separation: 2.0,
            sparsity: 0.0,
            noise: 0.1,
            add_bias: true,
            seed: 0,
        }
    }
}

fn rng(spec: &SynthSpec) -> RngStream {
    RngStream::new(spec.seed, 0, Purpose::Synthetic)
}

fn finish_row(mut x: Vec<f64>, sparsity: f64, add_bias: bool, r: &mut RngStream) -> SparseRow {
    if sparsity > 0.0 {
        for v in x.iter_mut() {
            if r.uniform() < sparsity {
                *v = 0.0;
            }
        }
    }
    let row = SparseRow::from_dense(&x);
    if add_bias {
        row.with_bias()
    } else {
        row
    }
}

/// Unit-variance Gaussian blobs, rows cycling through the classes.
///
/// Two classes sit at `±separation` on the first axis. More classes sit on a
/// circle of radius `separation` in the first two axes (or along the first
/// axis when there is only one feature).
pub fn blobs(spec: &SynthSpec) -> Result<Dataset> {
    let mut r = rng(spec);
    let m = spec.classes.max(2);
    let mut rows = Vec::with_capacity(spec.rows);
    let mut labels = Vec::with_capacity(spec.rows);
    for d in 0..spec.rows {
        let c = d % m;
        let mut x: Vec<f64> = (0..spec.features).map(|_| r.standard_normal()).collect();
        if m == 2 {
            let y = if c == 0 { 1.0 } else { -1.0 };
            if let Some(x0) = x.first_mut() {
                *x0 += y * spec.separation;
            }
            labels.push(y);
        } else {
            let a = 2.0 * PI * c as f64 / m as f64;
            match x.as_mut_slice() {
                [x0, x1, ..] => {
                    *x0 += spec.separation * a.cos();
                    *x1 += spec.separation * a.sin();
                }
                [x0] => *x0 += spec.separation * c as f64,
                [] => {}
            }
            labels.push((c + 1) as f64);
        }
        rows.push(finish_row(x, spec.sparsity, spec.add_bias, &mut r));
    }
    let (task, classes) = if m == 2 { (Task::Cls, None) } else { (Task::Mlt, Some(m)) };
    Ok(Dataset::new(rows, labels, task, classes, spec.add_bias)?)
}

/// Standard-normal coefficients for [`linear_targets`].
pub fn coefficients(spec: &SynthSpec) -> Vec<f64> {
    let mut r = RngStream::new(spec.seed, 1, Purpose::Synthetic);
    (0..spec.features).map(|_| r.standard_normal()).collect()
}

/// `y = a·x + noise·ε` with standard-normal `x` and `a` from [`coefficients`].
pub fn linear_targets(spec: &SynthSpec, a: &[f64]) -> Result<Dataset> {
    let mut r = rng(spec);
    let mut rows = Vec::with_capacity(spec.rows);
    let mut labels = Vec::with_capacity(spec.rows);
    for _ in 0..spec.rows {
        let x: Vec<f64> = (0..spec.features).map(|_| r.standard_normal()).collect();
        let row = finish_row(x, spec.sparsity, false, &mut r);
        labels.push(row.dot(a) + spec.noise * r.standard_normal());
        rows.push(if spec.add_bias { row.with_bias() } else { row });
    }
    Ok(Dataset::new(rows, labels, Task::Svr, None, spec.add_bias)?)
}

/// Two interleaved half circles with Gaussian jitter of scale `noise`.
pub fn moons(spec: &SynthSpec) -> Result<Dataset> {
    let mut r = rng(spec);
    let mut rows = Vec::with_capacity(spec.rows);
    let mut labels = Vec::with_capacity(spec.rows);
    for d in 0..spec.rows {
        let t = PI * r.uniform();
        let (x, y, label) = if d % 2 == 0 {
            (t.cos(), t.sin(), 1.0)
        } else {
            (1.0 - t.cos(), 0.5 - t.sin(), -1.0)
        };
        let x = vec![x + spec.noise * r.standard_normal(), y + spec.noise * r.standard_normal()];
        rows.push(finish_row(x, 0.0, spec.add_bias, &mut r));
        labels.push(label);
    }
    Ok(Dataset::new(rows, labels, Task::Cls, None, spec.add_bias)?)
}

/// The four corners of the square with XOR labels.
pub fn xor(add_bias: bool) -> Dataset {
    let pts = [([1.0, 1.0], 1.0), ([-1.0, -1.0], 1.0), ([1.0, -1.0], -1.0), ([-1.0, 1.0], -1.0)];
    let mut unused = RngStream::new(0, 0, Purpose::Synthetic);
    let rows = pts.iter().map(|(x, _)| finish_row(x.to_vec(), 0.0, add_bias, &mut unused)).collect();
    let labels = pts.iter().map(|p| p.1).collect();
    Dataset::new(rows, labels, Task::Cls, None, add_bias).expect("fixed points are valid")
}
