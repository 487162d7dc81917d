//! Config-driven experiments and their reports.

pub mod config;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, ExperimentKind};
pub use report::{CheckRecord, ExperimentReport};
pub use run::{prepare_output_dir, run_experiment, write_outputs, Outcome};
