//! Training configuration.

use alloc::format;

use crate::data::Task;
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// Primal weights over the feature space.
    Lin,
    /// Coefficients over the training set through a Gram matrix.
    Krn,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Lin => "lin",
            Solver::Krn => "krn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lin" => Some(Solver::Lin),
            "krn" => Some(Solver::Krn),
            _ => None,
        }
    }
}

/// Expectation–maximization or Gibbs sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Em,
    Mc,
}

/// What a sampling run returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McEstimator {
    /// Running mean of the post-burn-in samples.
    #[default]
    Average,
    /// The post-burn-in sample with the lowest objective.
    BestSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub solver: Solver,
    pub algo: Algorithm,
    pub task: Task,
    /// Regularization strength λ, multiplying `‖w‖²/2`.
    pub lambda: f64,
    /// Insensitivity width for regression.
    pub epsilon: f64,
    pub kernel: KernelSpec,
    /// Worker (shard) count P.
    pub workers: usize,
    pub max_iters: usize,
    /// EM stops once the objective moves by at most `tol_scale * N`.
    pub tol_scale: f64,
    /// Sampling iterations discarded before averaging.
    pub burn_in: usize,
    /// Lower clamp for every latent scale.
    pub gamma_floor: f64,
    pub seed: u64,
    pub add_bias: bool,
    pub mc_estimator: McEstimator,
    /// Largest training set the kernel solver will hold as a dense Gram matrix.
    pub gram_cap: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            solver: Solver::Lin,
            algo: Algorithm::Em,
            task: Task::Cls,
            lambda: 1.0,
            epsilon: 1e-3,
            kernel: KernelSpec::Gaussian { sigma: 1.0 },
            workers: 1,
            max_iters: 200,
            tol_scale: 1e-3,
            burn_in: 10,
            gamma_floor: 1e-6,
            seed: 0,
            add_bias: true,
            mc_estimator: McEstimator::Average,
            gram_cap: 8192,
        }
    }
}

impl TrainConfig {
    /// λ from the soft-margin constant C, with `(λ/2)‖w‖² + 2Σξ ∝ ½‖w‖² + CΣξ`.
    pub fn lambda_from_c(c: f64) -> f64 {
        2.0 / c
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: alloc::string::String| Err(Error::InvalidConfig(m));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be nonnegative, got {}", self.epsilon));
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if !(self.tol_scale > 0.0) {
            return bad(format!("tol_scale must be positive, got {}", self.tol_scale));
        }
        if !(self.gamma_floor > 0.0 && self.gamma_floor.is_finite()) {
            return bad(format!("gamma_floor must be positive, got {}", self.gamma_floor));
        }
        if self.algo == Algorithm::Mc && self.burn_in >= self.max_iters {
            return bad(format!(
                "burn_in ({}) must be below max_iters ({})",
                self.burn_in, self.max_iters
            ));
        }
        if self.solver == Solver::Krn && self.task != Task::Cls {
            return bad(format!("kernel solver supports only cls, got {}", self.task.as_str()));
        }
        if self.solver == Solver::Krn {
            self.kernel.validate()?;
        }
        Ok(())
    }
}
