//! Competition runs: launching solvers, persisting what they did, scoring
//! the results and writing reports.
//!
//! Everything downstream of [`suite::run_suite`] reads only the results
//! directory, so scores and reports can be regenerated at any time.

pub mod manifest;
pub mod output;
pub mod report;
pub mod runner;
pub mod store;
pub mod suite;

pub use manifest::{ManifestError, ProblemDef, SuiteManifest, SystemDef};
pub use output::{parse_solver_output, AnswerKind, AnswerSummary, SolverAnswer};
pub use report::emit_report;
pub use runner::{run_instance, LimitViolation, Limits, RunRecord};
pub use store::{load_store, Evaluation, ScoredStore};
pub use suite::{run_suite, SuiteOptions};
