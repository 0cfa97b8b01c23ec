//! Command-line front end of `tempus`: scenario configs, CSV tables, plot
//! scripts and pass/fail reports.

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod sampling;
pub mod scenarios;
pub mod selftest;

pub use config::{Scenario, ScenarioConfig};
pub use error::{CliError, FieldError, Result};
pub use report::{Check, RunReport};
pub use scenarios::{execute, run_scenario, Outcome};
