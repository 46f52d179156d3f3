use alloc::format;
use alloc::vec::Vec;

use super::executor::{Executor, WorkerFault};
use super::reduce::{reduce_stats, ReducePlan};
use super::timing::{IterationTiming, RankTiming};
use crate::error::{Error, Result};
use crate::linalg::UpperTriangle;
use crate::linear::PartialStats;
use crate::shard::Shard;
use crate::stochastic::RngStream;

/// Everything one worker owns between iterations.
#[derive(Debug, Clone)]
pub struct WorkerContext<'a, S> {
    pub rank: usize,
    pub shard: Shard<'a>,
    /// Engine-specific augmented state (latent scales, caches).
    pub state: S,
    pub rng: RngStream,
    /// The coordinator's latest broadcast.
    pub weights: Vec<f64>,
    /// Map phases completed so far.
    pub completed: usize,
}

/// The per-shard half of one augmented update.
pub trait MapStep<S>: Sync {
    /// Refreshes the latent scales from `ctx.weights`.
    fn draw_scales(&self, ctx: &mut WorkerContext<'_, S>) -> Result<()>;
    /// Local mean term `μᵖ`.
    fn local_mu(&self, ctx: &WorkerContext<'_, S>) -> Vec<f64>;
    /// Local precision term `Σᵖ`, upper triangle only.
    fn local_sigma(&self, ctx: &WorkerContext<'_, S>) -> UpperTriangle;
    /// Called after `ctx.weights` has been replaced by a broadcast.
    fn receive(&self, _ctx: &mut WorkerContext<'_, S>) {}
}

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub weights: Vec<f64>,
    /// Reduced statistics the coordinator solved with.
    pub stats: PartialStats,
    pub timing: IterationTiming,
}

pub(crate) fn attribute(iteration: usize) -> impl Fn((usize, WorkerFault)) -> Error {
    move |(rank, fault)| match fault {
        WorkerFault::Failed(e) => Error::Worker {
            rank,
            iteration,
            source: alloc::boxed::Box::new(e),
        },
        WorkerFault::Panicked(message) => Error::WorkerPanic {
            rank,
            iteration,
            message,
        },
    }
}

/// One map-reduce round.
///
/// 1. every worker draws its scales and computes `μᵖ`, `Σᵖ` (in parallel);
/// 2. all workers are joined;
/// 3. the partials are summed along `plan`;
/// 4. `global` turns the sums into new weights on the coordinator;
/// 5. the weights are copied to every worker.
pub fn run_iteration<E, S, M, G>(
    exec: &E,
    contexts: &mut [WorkerContext<'_, S>],
    step: &M,
    plan: &ReducePlan,
    iteration: usize,
    global: G,
) -> Result<IterationOutcome>
where
    E: Executor,
    S: Send,
    M: MapStep<S>,
    G: FnOnce(&PartialStats) -> Result<Vec<f64>>,
{
    if contexts.len() != plan.workers() {
        return Err(Error::Precondition(format!(
            "{} worker contexts for a {}-rank plan",
            contexts.len(),
            plan.workers()
        )));
    }
    let map = exec
        .run(contexts, |_, ctx| {
            let t0 = exec.now();
            step.draw_scales(ctx)?;
            let t1 = exec.now();
            let mu = step.local_mu(ctx);
            let t2 = exec.now();
            let sigma = step.local_sigma(ctx);
            let t3 = exec.now();
            ctx.completed += 1;
            let stats = PartialStats {
                mu,
                sigma,
                count: ctx.shard.len(),
            };
            Ok((stats, [t1 - t0, t2 - t1, t3 - t2], t3))
        })
        .map_err(attribute(iteration))?;

    // barrier: no rank may be ahead or behind
    let expected = contexts[0].completed;
    if let Some(c) = contexts.iter().find(|c| c.completed != expected) {
        return Err(Error::Precondition(format!(
            "rank {} completed {} map phases, rank 0 completed {}",
            c.rank, c.completed, expected
        )));
    }

    let finish = map.iter().map(|m| m.2).fold(f64::NEG_INFINITY, f64::max);
    let mut ranks = Vec::with_capacity(map.len());
    let mut partials = Vec::with_capacity(map.len());
    for (stats, [draw, mu, sigma], done) in map {
        ranks.push(RankTiming {
            draw,
            mu,
            sigma,
            barrier_wait: finish - done,
        });
        partials.push(stats);
    }

    let t0 = exec.now();
    let stats = reduce_stats(plan, partials)?;
    let t1 = exec.now();
    let weights = global(&stats)?;
    let t2 = exec.now();
    exec.run(contexts, |_, ctx| {
        ctx.weights.clone_from(&weights);
        step.receive(ctx);
        Ok(())
    })
    .map_err(attribute(iteration))?;
    let t3 = exec.now();

    Ok(IterationOutcome {
        weights,
        stats,
        timing: IterationTiming {
            iteration,
            block: None,
            ranks,
            reduce: t1 - t0,
            solve: t2 - t1,
            broadcast: t3 - t2,
        },
    })
}
