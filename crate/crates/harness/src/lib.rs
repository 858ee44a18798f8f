//! Data loading, synthetic signals and Monte-Carlo accuracy experiments for
//! `ccsketch`, shared by the `ccsketch` command-line tool and its tests.

pub mod error;
pub mod experiment;
pub mod input;
pub mod report;
pub mod zipf;

pub use error::{HarnessError, Result};
pub use experiment::{run_mse_experiment, ExperimentConfig, Target};
pub use input::{
    format_sparse_vectors, load_sparse_vectors, load_stream, parse_sparse_vectors, parse_stream, write_sparse_vectors,
};
pub use report::{emit_csv, min_mse_curves, read_csv, MseReport, MseRow, CSV_HEADER};
pub use zipf::{synthesize_zipf, ZipfSpec};
