//! Random variates and factorizations used by the samplers.

mod inverse_gaussian;
mod precision;
mod rng;

pub use inverse_gaussian::{draw_inverse_gaussian, draw_reciprocal_scale, InverseGaussian};
pub use precision::{cholesky_with_jitter, draw_gaussian_from_precision, draw_gaussian_with_noise, solve_mean, Cholesky, PrecisionSystem};
pub use rng::{Purpose, RngStream};
