//! Experiment harness: configuration, stratified cross-validation,
//! compression benchmarks and report output.

pub mod bench;
pub mod config;
pub mod cv;
pub mod folds;
pub mod pipeline;
pub mod report;

pub use bench::{benchmark_compression, estimate_training_bytes, BenchReport, RunOutcome};
pub use config::{load_config, ExperimentConfig, CONFIG_VERSION};
pub use cv::{cross_validate, fold_model_seed, run_cross_validation, CvSummary, ExperimentReport, FoldResult};
pub use folds::{complement, stratified_folds};
pub use pipeline::{load_dataset, run_training, DatasetSummary, Prepared, Timings, TrainReport};
pub use report::{emit_report, load_report, table_path, Tabular};

/// Version string written into every report.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
