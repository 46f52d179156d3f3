//! Host side of `augsvm-core`: a thread-per-rank executor, LIBSVM and model
//! files, synthetic data, metrics, benchmarks and the command line.

pub mod bench;
pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod synth;
pub mod threads;

pub use error::{Error, Result};
pub use threads::ThreadExecutor;
