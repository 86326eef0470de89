//! Monte-Carlo harness: run configuration, experiment runners, metrics and
//! the plain-text file formats used by the CLI.

pub mod config;
pub mod io;
pub mod metrics;
pub mod runner;

pub use config::{parse_list, parse_snr_range, Parallelism, ResolvedRun, RunConfig, ScenarioRef};
pub use metrics::{summarize, Method, MethodSummary, MetricsRow};
pub use runner::{
    dim_sweep, dump_instance, estimate_from_files, lambda_sensitivity, load_model, run_scenario,
    verify_theorem, EstimateReport, RunReport, TheoremReport, TheoremRow,
};
