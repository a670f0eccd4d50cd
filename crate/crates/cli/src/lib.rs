//! Config-driven front end for the `airyspdc` simulation library.

pub mod config;
pub mod csv;
pub mod run;

pub use config::{load, parse_config, validate, Diagnostic, Scenario, ScenarioConfig};
pub use run::{compute, run_scenario, RunError};
