//! Experiment runner for the star-bath simulator: configuration, figure
//! jobs, N sweeps, validation suites and CSV/JSON output.

pub mod config;
pub mod error;
pub mod jobs;
pub mod output;
pub mod run;
pub mod table;
pub mod validate;

pub use config::{ExperimentConfig, GridSpec, JobKind, PivnChoice};
pub use error::{HarnessError, Result};
pub use jobs::{run_job, JobOutput};
pub use run::{DerivedConstants, Observables, Simulation};
pub use table::{Column, ResultTable};
pub use validate::{run_validate, ValidationReport};
