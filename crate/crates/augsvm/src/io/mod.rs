//! Dataset, model and timing files.

pub mod libsvm;
pub mod model_file;
pub mod timing_csv;

pub use libsvm::{parse_libsvm, parse_libsvm_split, parse_libsvm_str, read_records, write_libsvm, LabelMode, ParseOptions, Records};
pub use model_file::{load_model, save_model};
pub use timing_csv::write_timing_csv;
