//! Scenario runner behind the `contour-jets` binary.
//!
//! A scenario is a JSON document `{"version": 1, "kind": ..., "payload": ..., "seed": ...}`;
//! a batch is `{"version": 1, "scenarios": [...]}`. Running a scenario yields a
//! [`RunReport`](scenario::RunReport).

pub mod error;
pub mod format;
pub mod payload;
pub mod plot;
pub mod random;
pub mod runner;
pub mod scenario;

pub use error::CliError;
pub use runner::{run_input, run_scenario, Options};
pub use scenario::{Input, Kind, RunReport, Scenario};
