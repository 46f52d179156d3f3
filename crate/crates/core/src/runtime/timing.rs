use alloc::vec::Vec;

use crate::trace::TrainTrace;

/// Map-phase durations of one rank, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RankTiming {
    pub draw: f64,
    pub mu: f64,
    pub sigma: f64,
    /// Time between this rank finishing and the slowest rank finishing.
    pub barrier_wait: f64,
}

/// Durations of one map-reduce round.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTiming {
    /// 1-based iteration (sweep for multiclass).
    pub iteration: usize,
    /// 0-based class block within a multiclass sweep.
    pub block: Option<usize>,
    pub ranks: Vec<RankTiming>,
    pub reduce: f64,
    pub solve: f64,
    pub broadcast: f64,
}

impl IterationTiming {
    fn slowest(&self, f: impl Fn(&RankTiming) -> f64) -> f64 {
        self.ranks.iter().map(f).fold(0.0, f64::max)
    }

    /// Wall time of the map phase (slowest rank).
    pub fn map_seconds(&self) -> f64 {
        self.slowest(|r| r.draw + r.mu + r.sigma)
    }

    pub fn total(&self) -> f64 {
        self.map_seconds() + self.reduce + self.solve + self.broadcast
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    DrawScales,
    LocalMu,
    LocalSigma,
    Reduce,
    Solve,
    Broadcast,
    BarrierWait,
}

impl Phase {
    /// The six phases of one round, in execution order.
    pub const ROUND: [Phase; 6] = [
        Phase::DrawScales,
        Phase::LocalMu,
        Phase::LocalSigma,
        Phase::Reduce,
        Phase::Solve,
        Phase::Broadcast,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::DrawScales => "draw_scales",
            Phase::LocalMu => "local_mu",
            Phase::LocalSigma => "local_sigma",
            Phase::Reduce => "reduce",
            Phase::Solve => "solve",
            Phase::Broadcast => "broadcast",
            Phase::BarrierWait => "barrier_wait",
        }
    }
}

/// Per-round phase durations; map phases are the slowest rank's.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSummary {
    pub iteration: usize,
    pub block: Option<usize>,
    pub phases: [(Phase, f64); 6],
}

impl PhaseSummary {
    pub fn seconds(&self, phase: Phase) -> f64 {
        self.phases.iter().find(|p| p.0 == phase).map_or(0.0, |p| p.1)
    }
}

/// One row of the machine-readable timing table. Coordinator phases are
/// attributed to rank 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub iteration: usize,
    pub phase: Phase,
    pub rank: usize,
    pub seconds: f64,
}

pub fn timing_report(trace: &TrainTrace) -> Vec<PhaseSummary> {
    trace
        .timings
        .iter()
        .map(|t| PhaseSummary {
            iteration: t.iteration,
            block: t.block,
            phases: [
                (Phase::DrawScales, t.slowest(|r| r.draw)),
                (Phase::LocalMu, t.slowest(|r| r.mu)),
                (Phase::LocalSigma, t.slowest(|r| r.sigma)),
                (Phase::Reduce, t.reduce),
                (Phase::Solve, t.solve),
                (Phase::Broadcast, t.broadcast),
            ],
        })
        .collect()
}

pub fn timing_rows(trace: &TrainTrace) -> Vec<PhaseRow> {
    let mut rows = Vec::new();
    for t in &trace.timings {
        let row = |phase, rank, seconds| PhaseRow {
            iteration: t.iteration,
            phase,
            rank,
            seconds,
        };
        for (rank, r) in t.ranks.iter().enumerate() {
            rows.push(row(Phase::DrawScales, rank, r.draw));
            rows.push(row(Phase::LocalMu, rank, r.mu));
            rows.push(row(Phase::LocalSigma, rank, r.sigma));
            rows.push(row(Phase::BarrierWait, rank, r.barrier_wait));
        }
        rows.push(row(Phase::Reduce, 0, t.reduce));
        rows.push(row(Phase::Solve, 0, t.solve));
        rows.push(row(Phase::Broadcast, 0, t.broadcast));
    }
    rows
}
