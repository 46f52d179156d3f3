use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::scales::{update_scales_cls, update_scales_svr, UpdateKind};
use super::stats::{local_mu_cls, local_mu_svr, local_sigma_cls, local_sigma_svr, PartialStats};
use crate::config::{Algorithm, McEstimator, Solver, TrainConfig};
use crate::data::{Dataset, Task};
use crate::error::{Error, Result};
use crate::linalg::UpperTriangle;
use crate::model::{Model, Weights};
use crate::objective::{objective_cls, objective_svr};
use crate::runtime::{run_iteration, Executor, MapStep, ReducePlan, WorkerContext};
use crate::shard::partition;
use crate::stochastic::{cholesky_with_jitter, draw_gaussian_with_noise, PrecisionSystem, Purpose, RngStream};
use crate::trace::{EmStopping, StopReason, TrainTrace};

/// Weights produced by the coordinator, with the jitter the factorization needed.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalStep {
    pub weights: Vec<f64>,
    pub jitter: f64,
}

/// `A = λI + Σ`, `b = μ` from reduced statistics.
pub fn precision_from_stats(lambda: f64, stats: &PartialStats) -> PrecisionSystem {
    let mut a = stats.sigma.clone();
    for i in 0..a.dim() {
        *a.get_mut(i, i) += lambda;
    }
    PrecisionSystem {
        a,
        b: stats.mu.clone(),
    }
}

/// EM: `A⁻¹b`. MC: one draw from `N(A⁻¹b, A⁻¹)`.
pub fn solve_or_draw(sys: &PrecisionSystem, kind: UpdateKind<'_>) -> Result<GlobalStep> {
    if !sys.a.is_finite() || sys.b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("global statistics"));
    }
    let chol = cholesky_with_jitter(&sys.a)?;
    let mean = chol.solve(&sys.b);
    let weights = match kind {
        UpdateKind::Em => mean,
        UpdateKind::Mc(rng) => {
            let z: Vec<f64> = (0..sys.dim()).map(|_| rng.standard_normal()).collect();
            draw_gaussian_with_noise(&chol, &mean, &z)
        }
    };
    Ok(GlobalStep {
        weights,
        jitter: chol.jitter(),
    })
}

/// Sums the partials in rank-tree order and solves (EM) or draws (MC) `w`.
pub fn global_update(lambda: f64, partials: Vec<PartialStats>, kind: UpdateKind<'_>) -> Result<GlobalStep> {
    if partials.is_empty() {
        return Err(Error::Precondition("global update needs at least one partial".into()));
    }
    if partials.iter().all(|p| p.count == 0) {
        return Err(Error::Precondition("global update over zero data".into()));
    }
    let plan = ReducePlan::new(partials.len());
    let stats = crate::runtime::reduce_stats(&plan, partials)?;
    solve_or_draw(&precision_from_stats(lambda, &stats), kind)
}

/// Worker-owned latent scales.
#[derive(Debug, Clone, Default)]
pub(crate) struct Scales {
    pub gamma: Vec<f64>,
    pub omega: Vec<f64>,
}

struct LinearStep {
    task: Task,
    algo: Algorithm,
    epsilon: f64,
    floor: f64,
}

impl MapStep<Scales> for LinearStep {
    fn draw_scales(&self, ctx: &mut WorkerContext<'_, Scales>) -> Result<()> {
        let kind = match self.algo {
            Algorithm::Em => UpdateKind::Em,
            Algorithm::Mc => UpdateKind::Mc(&mut ctx.rng),
        };
        match self.task {
            Task::Svr => {
                let (g, o) = update_scales_svr(&ctx.weights, &ctx.shard, self.epsilon, kind, self.floor)?;
                ctx.state.gamma = g;
                ctx.state.omega = o;
            }
            _ => ctx.state.gamma = update_scales_cls(&ctx.weights, &ctx.shard, kind, self.floor)?,
        }
        Ok(())
    }

    fn local_mu(&self, ctx: &WorkerContext<'_, Scales>) -> Vec<f64> {
        match self.task {
            Task::Svr => local_mu_svr(&ctx.shard, &ctx.state.gamma, &ctx.state.omega, self.epsilon),
            _ => local_mu_cls(&ctx.shard, &ctx.state.gamma),
        }
    }

    fn local_sigma(&self, ctx: &WorkerContext<'_, Scales>) -> UpperTriangle {
        match self.task {
            Task::Svr => local_sigma_svr(&ctx.shard, &ctx.state.gamma, &ctx.state.omega),
            _ => local_sigma_cls(&ctx.shard, &ctx.state.gamma),
        }
    }
}

/// Running post-burn-in mean, or the best sample, of MC draws.
pub(crate) struct SampleSummary {
    estimator: McEstimator,
    mean: Vec<f64>,
    count: usize,
    best: Option<(f64, Vec<f64>)>,
}

impl SampleSummary {
    pub(crate) fn new(estimator: McEstimator, dim: usize) -> Self {
        Self {
            estimator,
            mean: vec![0.0; dim],
            count: 0,
            best: None,
        }
    }

    pub(crate) fn push(&mut self, sample: &[f64], objective: f64) {
        self.count += 1;
        let k = self.count as f64;
        for (m, s) in self.mean.iter_mut().zip(sample) {
            *m += (s - *m) / k;
        }
        if self.best.as_ref().map_or(true, |(o, _)| objective < *o) {
            self.best = Some((objective, sample.to_vec()));
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub(crate) fn estimate(&self) -> &[f64] {
        match (self.estimator, &self.best) {
            (McEstimator::BestSample, Some((_, w))) => w,
            _ => &self.mean,
        }
    }
}

pub(crate) fn check_engine(data: &Dataset, config: &TrainConfig, solver: Solver, tasks: &[Task]) -> Result<()> {
    config.validate()?;
    if config.solver != solver {
        return Err(Error::InvalidConfig(format!(
            "{} engine asked to run solver {}",
            solver.as_str(),
            config.solver.as_str()
        )));
    }
    if !tasks.contains(&config.task) {
        return Err(Error::InvalidConfig(format!(
            "{} engine does not handle task {}",
            solver.as_str(),
            config.task.as_str()
        )));
    }
    if data.task() != config.task {
        return Err(Error::InvalidConfig(format!(
            "configured for {} but the dataset is {}",
            config.task.as_str(),
            data.task().as_str()
        )));
    }
    if config.workers > data.len() {
        return Err(Error::Partition {
            rows: data.len(),
            workers: config.workers,
        });
    }
    Ok(())
}

/// Shared EM/MC outer loop over an already sharded problem.
///
/// `solve` maps reduced statistics to a new iterate; `objective` scores an
/// iterate. Returns the final estimate and the trace.
pub(crate) fn drive<E, S, M, O, G>(
    exec: &E,
    contexts: &mut [WorkerContext<'_, S>],
    step: &M,
    config: &TrainConfig,
    n: usize,
    dim: usize,
    objective: O,
    mut solve: G,
) -> Result<(Vec<f64>, TrainTrace)>
where
    E: Executor,
    S: Send,
    M: MapStep<S>,
    O: Fn(&[f64]) -> Result<f64>,
    G: FnMut(&PartialStats, UpdateKind<'_>) -> Result<GlobalStep>,
{
    let plan = ReducePlan::new(contexts.len());
    let mut coord_rng = RngStream::new(config.seed, 0, Purpose::Weights);
    let mut w = vec![0.0; dim];
    let mut trace = TrainTrace::new(objective(&w)?);
    let mut stopping = EmStopping::new(config.tol_scale, n, trace.initial_objective);
    let mut samples = SampleSummary::new(config.mc_estimator, dim);

    for t in 1..=config.max_iters {
        let start = exec.now();
        let mut jitter = 0.0;
        let outcome = run_iteration(exec, contexts, step, &plan, t, |stats| {
            let kind = match config.algo {
                Algorithm::Em => UpdateKind::Em,
                Algorithm::Mc => UpdateKind::Mc(&mut coord_rng),
            };
            let g = solve(stats, kind)?;
            jitter = g.jitter;
            Ok(g.weights)
        })?;
        trace.max_jitter = trace.max_jitter.max(jitter);
        trace.timings.push(outcome.timing);
        w = outcome.weights;
        let sample_obj = objective(&w)?;
        let stop = match config.algo {
            Algorithm::Em => {
                trace.objectives.push(sample_obj);
                stopping.observe(sample_obj)
            }
            Algorithm::Mc => {
                trace.sample_objectives.push(sample_obj);
                if t > config.burn_in {
                    samples.push(&w, sample_obj);
                    trace.objectives.push(objective(samples.estimate())?);
                } else {
                    trace.objectives.push(sample_obj);
                }
                false
            }
        };
        trace.iteration_seconds.push(exec.now() - start);
        if stop {
            trace.stop = StopReason::Converged;
            break;
        }
    }

    let estimate = match config.algo {
        Algorithm::Mc if !samples.is_empty() => samples.estimate().to_vec(),
        _ => w,
    };
    Ok((estimate, trace))
}

/// Trains a linear binary classifier or regressor.
///
/// Starts at `w = 0`. EM stops at the first iteration whose objective is
/// within `tol_scale · N` of the previous one; MC runs `max_iters`
/// iterations and returns the mean (or best) of the post-burn-in samples.
pub fn train_linear<E: Executor>(data: &Dataset, config: &TrainConfig, exec: &E) -> Result<(Model, TrainTrace)> {
    check_engine(data, config, Solver::Lin, &[Task::Cls, Task::Svr])?;
    let dim = data.dim();
    let objective = |w: &[f64]| match config.task {
        Task::Svr => objective_svr(w, data, config.lambda, config.epsilon),
        _ => objective_cls(w, data, config.lambda),
    };

    let mut contexts: Vec<WorkerContext<'_, Scales>> = partition(data, config.workers)?
        .into_iter()
        .map(|shard| WorkerContext {
            rank: shard.rank,
            state: Scales::default(),
            rng: RngStream::new(config.seed, shard.rank as u32, Purpose::Scales),
            weights: vec![0.0; dim],
            completed: 0,
            shard,
        })
        .collect();
    let step = LinearStep {
        task: config.task,
        algo: config.algo,
        epsilon: config.epsilon,
        floor: config.gamma_floor,
    };
    let (weights, trace) = drive(exec, &mut contexts, &step, config, data.len(), dim, objective, |stats, kind| {
        solve_or_draw(&precision_from_stats(config.lambda, stats), kind)
    })?;
    let model = Model {
        task: config.task,
        lambda: config.lambda,
        epsilon: if config.task == Task::Svr { config.epsilon } else { 0.0 },
        add_bias: data.has_bias(),
        dim,
        weights: Weights::Linear(weights),
    };
    Ok((model, trace))
}
