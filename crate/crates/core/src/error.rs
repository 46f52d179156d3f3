use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the solvers and their building blocks.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid sparse row: {0}")]
    InvalidRow(String),
    #[error("invalid labels: {0}")]
    InvalidLabels(String),
    #[error("no data rows")]
    EmptyDataset,
    #[error("cannot partition {rows} rows across {workers} workers")]
    Partition { rows: usize, workers: usize },
    #[error("matrix is not positive definite (tried jitter {jitters:?})")]
    NotPositiveDefinite { jitters: Vec<f64> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("gram matrix for {rows} rows exceeds the cap of {cap}")]
    GramTooLarge { rows: usize, cap: usize },
    #[error("worker {rank} failed in iteration {iteration}: {source}")]
    Worker {
        rank: usize,
        iteration: usize,
        source: Box<Error>,
    },
    #[error("worker {rank} panicked in iteration {iteration}: {message}")]
    WorkerPanic {
        rank: usize,
        iteration: usize,
        message: String,
    },
}

impl Error {
    /// True for failures of the numerics (factorization, non-finite values)
    /// as opposed to bad inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NonFinite(_) | Error::NotPositiveDefinite { .. } => true,
            Error::Worker { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
