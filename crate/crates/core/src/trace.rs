//! Training traces and the EM stopping rule.

use alloc::vec::Vec;

use crate::runtime::IterationTiming;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIters,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIters => "max_iters",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    /// Objective at the starting weights (all zero).
    pub initial_objective: f64,
    /// Objective of the returned estimate after each iteration (sweep).
    pub objectives: Vec<f64>,
    /// Sampling only: objective of the raw sample drawn in each iteration.
    pub sample_objectives: Vec<f64>,
    pub stop: StopReason,
    /// Wall time of each iteration, objective evaluation included.
    pub iteration_seconds: Vec<f64>,
    /// Per-round phase timings; one per class block for multiclass.
    pub timings: Vec<IterationTiming>,
    /// Multiclass only: seconds per class block, indexed `[sweep][class]`.
    pub class_seconds: Vec<Vec<f64>>,
    /// Largest diagonal jitter any factorization needed.
    pub max_jitter: f64,
}

impl TrainTrace {
    pub fn new(initial_objective: f64) -> Self {
        Self {
            initial_objective,
            objectives: Vec::new(),
            sample_objectives: Vec::new(),
            stop: StopReason::MaxIters,
            iteration_seconds: Vec::new(),
            timings: Vec::new(),
            class_seconds: Vec::new(),
            max_jitter: 0.0,
        }
    }

    pub fn iterations(&self) -> usize {
        self.objectives.len()
    }

    pub fn final_objective(&self) -> f64 {
        self.objectives.last().copied().unwrap_or(self.initial_objective)
    }

    /// Largest increase between consecutive entries of `initial, objectives...`.
    pub fn max_increase(&self) -> f64 {
        let mut prev = self.initial_objective;
        let mut worst = f64::NEG_INFINITY;
        for &o in &self.objectives {
            worst = worst.max(o - prev);
            prev = o;
        }
        worst
    }
}

/// Stops at the first objective within `threshold` of its predecessor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmStopping {
    threshold: f64,
    last: f64,
}

impl EmStopping {
    /// `threshold = tol_scale * N`, starting from the initial objective.
    pub fn new(tol_scale: f64, n: usize, initial_objective: f64) -> Self {
        Self {
            threshold: tol_scale * n as f64,
            last: initial_objective,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Records the next objective; true means stop now.
    pub fn observe(&mut self, objective: f64) -> bool {
        let done = (objective - self.last).abs() <= self.threshold;
        self.last = objective;
        done
    }
}
