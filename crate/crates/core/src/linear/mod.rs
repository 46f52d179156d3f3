//! Linear EM and Gibbs solvers for binary classification and regression.

mod scales;
mod stats;
pub(crate) mod train;

pub use scales::{scales_from_residuals, update_scales_cls, update_scales_svr, UpdateKind};
pub use stats::{
    local_mu_cls, local_mu_svr, local_sigma_cls, local_sigma_svr, local_stats_cls, local_stats_svr, weighted_gram,
    weighted_sum, PartialStats,
};
pub use train::{global_update, precision_from_stats, solve_or_draw, train_linear, GlobalStep};
