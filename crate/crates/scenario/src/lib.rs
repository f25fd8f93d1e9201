//! Scenario runner for slow-light soliton studies: calibration of the medium
//! from a measured pulse, the closed-form and simulated propagation, and CSV
//! and JSON output for plotting.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anchor;
pub mod config;
pub mod emit;
pub mod error;
pub mod run;
pub mod sweep;

pub use anchor::{calibrate_nu0, Nu0Calibration};
pub use config::{presets, ScenarioConfig};
pub use error::{ScenarioError, ScenarioResult};
pub use run::{run_scenario, RunReport};
pub use sweep::{run_sweep, SweepSpec};
