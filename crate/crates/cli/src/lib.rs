//! Experiment driver for the multi-point MRC solver: configuration files,
//! coefficient and field exports, and the benchmark suites.

pub mod config;
pub mod error;
pub mod files;
pub mod run;
pub mod suite;

pub use config::ExperimentSpec;
pub use error::{CliError, CliResult, EXIT_UNCONVERGED};
