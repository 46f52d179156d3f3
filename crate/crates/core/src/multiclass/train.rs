use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::reduction::{compute_reduction, mlt_mu, BinaryReduction};
use crate::config::{Algorithm, Solver, TrainConfig};
use crate::data::{Dataset, Task};
use crate::error::{Error, Result};
use crate::linalg::UpperTriangle;
use crate::linear::train::{check_engine, SampleSummary};
use crate::linear::{precision_from_stats, scales_from_residuals, solve_or_draw, weighted_gram, UpdateKind};
use crate::model::{Model, Weights};
use crate::objective::{objective_mlt, CostFn, ZeroOneCost};
use crate::runtime::{run_iteration, Executor, MapStep, ReducePlan, WorkerContext};
use crate::shard::{partition, Shard};
use crate::stochastic::{Purpose, RngStream};
use crate::trace::{EmStopping, StopReason, TrainTrace};

/// A worker's view of the sweep: cached scores `s_dy = w_y·x_d` for its
/// shard, row-major with `m` entries per datum, and the current block.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSweepState {
    m: usize,
    truth: Vec<usize>,
    scores: Vec<f64>,
    current: usize,
    reduction: BinaryReduction,
    gamma: Vec<f64>,
}

impl ClassSweepState {
    /// All-zero weights.
    pub fn new(shard: &Shard<'_>, m: usize) -> Self {
        Self {
            m,
            truth: shard.labels.iter().map(|&y| y as usize - 1).collect(),
            scores: vec![0.0; shard.len() * m],
            current: 0,
            reduction: BinaryReduction::default(),
            gamma: Vec::new(),
        }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn current(&self) -> usize {
        self.current
    }

    /// Recomputes class `y`'s column after `w_y` changed.
    pub fn refresh(&mut self, shard: &Shard<'_>, y: usize, w_y: &[f64]) {
        for (d, x) in shard.rows.iter().enumerate() {
            self.scores[d * self.m + y] = x.dot(w_y);
        }
    }
}

struct ClassStep<'c> {
    y: usize,
    algo: Algorithm,
    floor: f64,
    cost: &'c dyn CostFn,
}

impl MapStep<ClassSweepState> for ClassStep<'_> {
    fn draw_scales(&self, ctx: &mut WorkerContext<'_, ClassSweepState>) -> Result<()> {
        let st = &mut ctx.state;
        st.current = self.y;
        st.reduction = compute_reduction(&st.scores, &st.truth, st.m, self.y, self.cost)?;
        let mut kind = match self.algo {
            Algorithm::Em => UpdateKind::Em,
            Algorithm::Mc => UpdateKind::Mc(&mut ctx.rng),
        };
        let (m, y) = (st.m, self.y);
        let residuals = st.reduction.rho.iter().enumerate().map(|(d, r)| r - st.scores[d * m + y]);
        scales_from_residuals(residuals, &mut kind, self.floor, &mut st.gamma)
    }

    fn local_mu(&self, ctx: &WorkerContext<'_, ClassSweepState>) -> Vec<f64> {
        mlt_mu(&ctx.shard, &ctx.state.reduction, &ctx.state.gamma, ctx.weights.len())
    }

    fn local_sigma(&self, ctx: &WorkerContext<'_, ClassSweepState>) -> UpperTriangle {
        let g = &ctx.state.gamma;
        weighted_gram(ctx.shard.rows, ctx.weights.len(), |d| 1.0 / g[d])
    }

    fn receive(&self, ctx: &mut WorkerContext<'_, ClassSweepState>) {
        ctx.state.refresh(&ctx.shard, self.y, &ctx.weights);
    }
}

/// [`train_multiclass_with_cost`] with the 0/1 cost.
pub fn train_multiclass<E: Executor>(data: &Dataset, config: &TrainConfig, exec: &E) -> Result<(Model, TrainTrace)> {
    train_multiclass_with_cost(data, config, &ZeroOneCost, exec)
}

/// Crammer–Singer training by sweeps over classes `1..=M` in order.
///
/// Each class gets exactly one augmented update per sweep, using the latest
/// weights of every other class. One sweep is one iteration for stopping,
/// burn-in and averaging.
pub fn train_multiclass_with_cost<E: Executor>(
    data: &Dataset,
    config: &TrainConfig,
    cost: &dyn CostFn,
    exec: &E,
) -> Result<(Model, TrainTrace)> {
    check_engine(data, config, Solver::Lin, &[Task::Mlt])?;
    let m = data.num_classes();
    if m < 2 {
        return Err(Error::InvalidConfig(format!("multiclass needs at least 2 classes, got {m}")));
    }
    let dim = data.dim();
    let objective = |w: &[Vec<f64>]| objective_mlt(w, data, config.lambda, cost);

    let mut contexts: Vec<WorkerContext<'_, ClassSweepState>> = partition(data, config.workers)?
        .into_iter()
        .map(|shard| WorkerContext {
            rank: shard.rank,
            state: ClassSweepState::new(&shard, m),
            rng: RngStream::new(config.seed, shard.rank as u32, Purpose::Scales),
            weights: vec![0.0; dim],
            completed: 0,
            shard,
        })
        .collect();
    let plan = ReducePlan::new(config.workers);
    let mut coord_rng = RngStream::new(config.seed, 0, Purpose::Weights);

    let mut w = vec![vec![0.0; dim]; m];
    let mut trace = TrainTrace::new(objective(&w)?);
    let mut stopping = EmStopping::new(config.tol_scale, data.len(), trace.initial_objective);
    let mut samples = SampleSummary::new(config.mc_estimator, m * dim);
    let unflatten = |flat: &[f64]| flat.chunks_exact(dim).map(|c| c.to_vec()).collect::<Vec<_>>();

    for t in 1..=config.max_iters {
        let start = exec.now();
        let mut per_class = Vec::with_capacity(m);
        for y in 0..m {
            let block_start = exec.now();
            let step = ClassStep {
                y,
                algo: config.algo,
                floor: config.gamma_floor,
                cost,
            };
            let mut jitter = 0.0;
            let mut outcome = run_iteration(exec, &mut contexts, &step, &plan, t, |stats| {
                let kind = match config.algo {
                    Algorithm::Em => UpdateKind::Em,
                    Algorithm::Mc => UpdateKind::Mc(&mut coord_rng),
                };
                let g = solve_or_draw(&precision_from_stats(config.lambda, stats), kind)?;
                jitter = g.jitter;
                Ok(g.weights)
            })?;
            trace.max_jitter = trace.max_jitter.max(jitter);
            outcome.timing.block = Some(y);
            trace.timings.push(outcome.timing);
            w[y] = outcome.weights;
            per_class.push(exec.now() - block_start);
        }
        trace.class_seconds.push(per_class);

        let sample_obj = objective(&w)?;
        let stop = match config.algo {
            Algorithm::Em => {
                trace.objectives.push(sample_obj);
                stopping.observe(sample_obj)
            }
            Algorithm::Mc => {
                trace.sample_objectives.push(sample_obj);
                if t > config.burn_in {
                    let flat: Vec<f64> = w.concat();
                    samples.push(&flat, sample_obj);
                    trace.objectives.push(objective(&unflatten(samples.estimate()))?);
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

    let weights = match config.algo {
        Algorithm::Mc if !samples.is_empty() => unflatten(samples.estimate()),
        _ => w,
    };
    let model = Model {
        task: Task::Mlt,
        lambda: config.lambda,
        epsilon: 0.0,
        add_bias: data.has_bias(),
        dim,
        weights: Weights::Multiclass(weights),
    };
    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SparseRow;
    use crate::runtime::SerialExecutor;

    fn tiny() -> Dataset {
        let rows = vec![
            SparseRow::from_dense(&[1.0, 0.0, 1.0]),
            SparseRow::from_dense(&[0.0, 1.0, 1.0]),
            SparseRow::from_dense(&[-1.0, -1.0, 1.0]),
        ];
        Dataset::new(rows, vec![1.0, 2.0, 3.0], Task::Mlt, Some(3), true).unwrap()
    }

    #[test]
    fn first_objective_is_two_n() {
        let cfg = TrainConfig {
            task: Task::Mlt,
            max_iters: 2,
            ..Default::default()
        };
        let (model, trace) = train_multiclass(&tiny(), &cfg, &SerialExecutor::new()).unwrap();
        assert_eq!(trace.initial_objective, 6.0);
        assert_eq!(trace.class_seconds.len(), trace.iterations());
        assert_eq!(trace.class_seconds[0].len(), 3);
        assert_eq!(trace.timings.len(), 3 * trace.iterations());
        assert_eq!(trace.timings[1].block, Some(1));
        for (d, x) in tiny().rows().iter().enumerate() {
            assert_eq!(crate::predict(&model, x).unwrap(), crate::Prediction::Class(d + 1));
        }
    }

    #[test]
    fn one_class_rejected() {
        let d = Dataset::new(vec![SparseRow::from_dense(&[1.0])], vec![1.0], Task::Mlt, Some(1), false).unwrap();
        let cfg = TrainConfig {
            task: Task::Mlt,
            ..Default::default()
        };
        assert!(matches!(train_multiclass(&d, &cfg, &SerialExecutor::new()), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn cache_matches_weights() {
        let d = tiny();
        let shards = partition(&d, 1).unwrap();
        let mut st = ClassSweepState::new(&shards[0], 3);
        st.refresh(&shards[0], 2, &[0.5, -1.0, 2.0]);
        assert_eq!(st.scores()[2], 2.5);
        assert_eq!(st.scores()[5], 1.0);
        assert_eq!(st.scores()[8], 2.5);
        assert_eq!(st.scores()[0], 0.0);
    }
}
