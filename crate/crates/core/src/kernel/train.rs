use alloc::vec;
use alloc::vec::Vec;

use super::gram::{build_gram, GramMatrix};
use crate::config::{Algorithm, Solver, TrainConfig};
use crate::data::{Dataset, Task};
use crate::error::{Error, Result};
use crate::linalg::{dot, UpperTriangle};
use crate::linear::{scales_from_residuals, solve_or_draw, GlobalStep, PartialStats, UpdateKind};
use crate::linear::train::{check_engine, drive};
use crate::model::{Model, Weights};
use crate::objective::hinge;
use crate::runtime::{Executor, MapStep, WorkerContext};
use crate::shard::partition;
use crate::stochastic::{PrecisionSystem, Purpose, RngStream};
use crate::trace::TrainTrace;

fn check_omega(omega: &[f64], gram: &GramMatrix, labels: &[f64]) -> Result<()> {
    let n = gram.dim();
    for len in [omega.len(), labels.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    if omega.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("kernel coefficients"));
    }
    Ok(())
}

/// `(λ/2) ωᵀKω + 2 Σ_d max(0, 1 − y_d K_d·ω)`.
pub fn objective_krn(omega: &[f64], gram: &GramMatrix, labels: &[f64], lambda: f64) -> Result<f64> {
    check_omega(omega, gram, labels)?;
    let f = gram.mul_vec(omega);
    let loss: f64 = f.iter().zip(labels).map(|(f, y)| hinge(1.0 - y * f)).sum();
    Ok(0.5 * lambda * dot(omega, &f) + 2.0 * loss)
}

/// Scales for every datum from margins `1 − y_d K_d·ω`.
pub fn update_scales_krn(
    omega: &[f64],
    gram: &GramMatrix,
    labels: &[f64],
    mut kind: UpdateKind<'_>,
    floor: f64,
) -> Result<Vec<f64>> {
    check_omega(omega, gram, labels)?;
    let mut out = Vec::with_capacity(labels.len());
    let residuals = labels.iter().enumerate().map(|(d, y)| 1.0 - y * dot(gram.row(d), omega));
    scales_from_residuals(residuals, &mut kind, floor, &mut out)?;
    Ok(out)
}

/// `Σ_d y_d(1 + 1/γ_d) K_d` and the upper triangle of `Σ_d (1/γ_d) K_dᵀK_d`
/// over a block of consecutive Gram rows.
fn block_stats(krows: &[f64], n: usize, labels: &[f64], gamma: &[f64]) -> PartialStats {
    let mut mu = vec![0.0; n];
    let mut sigma = UpperTriangle::zeros(n);
    for (d, k) in krows.chunks_exact(n).enumerate() {
        let c = labels[d] * (1.0 + 1.0 / gamma[d]);
        for (m, v) in mu.iter_mut().zip(k) {
            *m += c * v;
        }
        sigma.add_outer_dense(1.0 / gamma[d], k);
    }
    PartialStats {
        mu,
        sigma,
        count: labels.len(),
    }
}

/// `A = λK + S`, `b = μ`, with `S`, `μ` the reduced data terms.
pub fn kernel_precision(lambda: f64, gram: &GramMatrix, stats: &PartialStats) -> Result<PrecisionSystem> {
    let n = gram.dim();
    if stats.dim() != n || stats.sigma.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: stats.dim(),
        });
    }
    let mut a = stats.sigma.clone();
    a.add_scaled_full(lambda, gram.as_slice());
    PrecisionSystem::new(a, stats.mu.clone())
}

/// `A = K + λΓ`, `b = y∘(1 + γ)`: the EM fixed point of the kernel system.
///
/// Multiplying this system by `K` gives `λK + KDK` with right side
/// `K y(1 + 1/γ)`, so every solution is a stationary point of the same
/// quadratic. Its condition number is that of `K` rather than its square,
/// which keeps EM monotone once many scales sit at the floor.
pub fn kernel_em_system(lambda: f64, gram: &GramMatrix, labels: &[f64], gamma: &[f64]) -> Result<PrecisionSystem> {
    let n = gram.dim();
    if labels.len() != n || gamma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.len().min(labels.len()),
        });
    }
    let mut a = UpperTriangle::zeros(n);
    a.add_scaled_full(1.0, gram.as_slice());
    for (d, g) in gamma.iter().enumerate() {
        *a.get_mut(d, d) += lambda * g;
    }
    let b = labels.iter().zip(gamma).map(|(y, g)| y * (1.0 + g)).collect();
    PrecisionSystem::new(a, b)
}

/// Solves (EM) or draws (MC) `ω` given all scales, on one thread.
pub fn krn_global_update(
    lambda: f64,
    gram: &GramMatrix,
    labels: &[f64],
    gamma: &[f64],
    kind: UpdateKind<'_>,
) -> Result<GlobalStep> {
    let n = gram.dim();
    if labels.len() != n || gamma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.len().min(labels.len()),
        });
    }
    match kind {
        UpdateKind::Em => solve_or_draw(&kernel_em_system(lambda, gram, labels, gamma)?, kind),
        UpdateKind::Mc(_) => {
            let stats = block_stats(gram.as_slice(), n, labels, gamma);
            solve_or_draw(&kernel_precision(lambda, gram, &stats)?, kind)
        }
    }
}

struct KernelState<'g> {
    krows: &'g [f64],
    gamma: Vec<f64>,
}

struct KernelStep {
    n: usize,
    algo: Algorithm,
    floor: f64,
    lambda: f64,
}

impl<'g> MapStep<KernelState<'g>> for KernelStep {
    fn draw_scales(&self, ctx: &mut WorkerContext<'_, KernelState<'g>>) -> Result<()> {
        let mut kind = match self.algo {
            Algorithm::Em => UpdateKind::Em,
            Algorithm::Mc => UpdateKind::Mc(&mut ctx.rng),
        };
        let omega = &ctx.weights;
        let residuals = ctx
            .state
            .krows
            .chunks_exact(self.n)
            .zip(ctx.shard.labels)
            .map(|(k, y)| 1.0 - y * dot(k, omega));
        scales_from_residuals(residuals, &mut kind, self.floor, &mut ctx.state.gamma)
    }

    fn local_mu(&self, ctx: &WorkerContext<'_, KernelState<'g>>) -> Vec<f64> {
        let mut mu = vec![0.0; self.n];
        if self.algo == Algorithm::Em {
            // this shard's slice of y∘(1 + γ)
            let start = ctx.shard.range().start;
            for (d, (y, g)) in ctx.shard.labels.iter().zip(&ctx.state.gamma).enumerate() {
                mu[start + d] = y * (1.0 + g);
            }
            return mu;
        }
        for (d, k) in ctx.state.krows.chunks_exact(self.n).enumerate() {
            let c = ctx.shard.labels[d] * (1.0 + 1.0 / ctx.state.gamma[d]);
            for (m, v) in mu.iter_mut().zip(k) {
                *m += c * v;
            }
        }
        mu
    }

    fn local_sigma(&self, ctx: &WorkerContext<'_, KernelState<'g>>) -> UpperTriangle {
        let mut sigma = UpperTriangle::zeros(self.n);
        if self.algo == Algorithm::Em {
            let start = ctx.shard.range().start;
            for (d, g) in ctx.state.gamma.iter().enumerate() {
                *sigma.get_mut(start + d, start + d) = self.lambda * g;
            }
            return sigma;
        }
        for (d, k) in ctx.state.krows.chunks_exact(self.n).enumerate() {
            sigma.add_outer_dense(1.0 / ctx.state.gamma[d], k);
        }
        sigma
    }
}

/// Trains a kernel binary classifier; every training row is kept as support.
///
/// Each worker owns the Gram rows of its shard. Under MC it contributes
/// `K_pᵀ D_p K_p`, so the reduced sum is `K D K` for the whole set; under EM
/// it contributes its slice of the diagonal `λΓ` and of `y∘(1 + γ)` for
/// [`kernel_em_system`].
pub fn train_kernel<E: Executor>(data: &Dataset, config: &TrainConfig, exec: &E) -> Result<(Model, TrainTrace)> {
    check_engine(data, config, Solver::Krn, &[Task::Cls])?;
    let n = data.len();
    let gram = build_gram(data, config.kernel, config.workers, config.gram_cap, exec)?;
    let labels = data.labels();

    let mut contexts: Vec<WorkerContext<'_, KernelState<'_>>> = partition(data, config.workers)?
        .into_iter()
        .map(|shard| WorkerContext {
            rank: shard.rank,
            state: KernelState {
                krows: gram.rows(shard.range()),
                gamma: Vec::new(),
            },
            rng: RngStream::new(config.seed, shard.rank as u32, Purpose::Scales),
            weights: vec![0.0; n],
            completed: 0,
            shard,
        })
        .collect();
    let step = KernelStep {
        n,
        algo: config.algo,
        floor: config.gamma_floor,
        lambda: config.lambda,
    };
    let objective = |w: &[f64]| objective_krn(w, &gram, labels, config.lambda);
    let (omega, trace) = drive(exec, &mut contexts, &step, config, n, n, objective, |stats, kind| {
        let sys = match kind {
            UpdateKind::Em => {
                let mut a = stats.sigma.clone();
                a.add_scaled_full(1.0, gram.as_slice());
                PrecisionSystem::new(a, stats.mu.clone())?
            }
            UpdateKind::Mc(_) => kernel_precision(config.lambda, &gram, stats)?,
        };
        solve_or_draw(&sys, kind)
    })?;
    drop(contexts);

    let model = Model {
        task: Task::Cls,
        lambda: config.lambda,
        epsilon: 0.0,
        add_bias: data.has_bias(),
        dim: data.dim(),
        weights: Weights::Kernel {
            omega,
            support: data.clone(),
            kernel: config.kernel,
        },
    };
    Ok((model, trace))
}
