//! Map-reduce execution: per-shard workers, a fixed combining tree and a
//! coordinator step.

mod executor;
mod iteration;
mod reduce;
mod timing;

pub use executor::{Executor, SerialExecutor, WorkerFault};
pub(crate) use iteration::attribute;
pub use iteration::{run_iteration, IterationOutcome, MapStep, WorkerContext};
pub use reduce::{reduce_stats, ReducePlan};
pub use timing::{timing_report, timing_rows, IterationTiming, Phase, PhaseRow, PhaseSummary, RankTiming};
