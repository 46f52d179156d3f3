//! Crammer–Singer multiclass training by blockwise class updates.
//!
//! With every other class fixed, the loss in `w_y` is a hinge in the
//! residual `ρ_d − w_y·x_d` with sign `β_d`, so each class block is one
//! binary-style augmented update that reuses the linear statistics.

mod reduction;
mod train;

pub use reduction::{compute_reduction, local_stats_mlt, update_scales_mlt, BinaryReduction};
pub use train::{train_multiclass, train_multiclass_with_cost, ClassSweepState};
