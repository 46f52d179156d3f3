//! Scale-mixture SVM solvers.
//!
//! Hinge, ε-insensitive and Crammer–Singer losses are written as Gaussian
//! scale mixtures with one latent scale per datum. Given the scales, the
//! weights are Gaussian with a precision that is a plain sum over data, so
//! each worker reduces its shard to a vector and an upper triangle, the
//! coordinator adds them up in a fixed tree order and solves (EM) or draws
//! (Gibbs sampling) the new weights.
//!
//! The crate is `no_std` and only needs `alloc`. Parallelism, clocks and
//! file formats are supplied by the host through [`runtime::Executor`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod config;
pub mod data;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod linear;
pub mod model;
pub mod multiclass;
pub mod objective;
pub mod runtime;
pub mod shard;
pub mod stochastic;
pub mod trace;

pub use config::{Algorithm, McEstimator, Solver, TrainConfig};
pub use data::{Dataset, SparseRow, Task};
pub use error::{Error, Result};
pub use kernel::{train_kernel, KernelSpec};
pub use linear::train_linear;
pub use model::{predict, Model, Prediction, Weights};
pub use multiclass::train_multiclass;
pub use objective::{objective_cls, objective_mlt, objective_svr, CostFn, ZeroOneCost};
pub use runtime::{Executor, SerialExecutor};
pub use shard::{partition, Shard};
pub use trace::{StopReason, TrainTrace};

/// Trains whichever engine `config` selects.
pub fn train<E: Executor>(data: &Dataset, config: &TrainConfig, exec: &E) -> Result<(Model, TrainTrace)> {
    config.validate()?;
    match (config.solver, config.task) {
        (Solver::Krn, _) => train_kernel(data, config, exec),
        (Solver::Lin, Task::Mlt) => train_multiclass(data, config, exec),
        (Solver::Lin, _) => train_linear(data, config, exec),
    }
}
