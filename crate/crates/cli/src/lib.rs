//! Scenario files, batch runs and reports for `qfc`.

// NaN-rejecting guards are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;
pub mod scenario;

pub use commands::{run, Command, Options};
pub use config::{ConfigError, ScenarioConfig, SweepSpec};
pub use scenario::{RunError, Scenario};
