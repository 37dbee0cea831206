//! Experiment harness for the damped Kirchhoff string: configuration
//! parsing, simulation and certification runs, parameter sweeps and their
//! CSV and key-value outputs.

pub mod config;
pub mod error;
pub mod initial;
pub mod run;
pub mod sweep;

pub use config::{parse_config, parse_sweep, ConfigError, Overrides, RunConfig, SweepConfig};
pub use error::HarnessError;
