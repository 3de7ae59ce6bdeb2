//! Tournaments, bound checks and reports.

mod bounds;
mod config;
mod experiment;
mod report;

pub use bounds::{bound_by_name, isolated_threshold, BoundSpec, Direction, BOUNDS};
pub use config::ExperimentConfig;
pub use experiment::{export_transcript, import_transcript, run_experiment, verdicts_for};
pub use report::{invariant_verdict, verify_bounds, BoundAtN, MatchRow, Report, Status, Verdict};
