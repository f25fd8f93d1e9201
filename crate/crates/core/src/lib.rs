//! Slow-light solitons in a three-level Λ medium with relaxation of the
//! excited level.
//!
//! * [`medium`], [`coords`], [`schedule`]: shared physical quantities.
//! * [`analytic`]: the closed-form relaxing soliton and its validity window.
//! * [`integrator`]: direct integration of the Maxwell–Bloch equations in
//!   retarded coordinates, used as the reference for the closed form.
//! * [`calibration`]: recovery of soliton parameters from experimental
//!   observables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod calibration;
pub mod coords;
pub mod error;
pub mod integrator;
pub mod medium;
pub mod schedule;

pub use error::{Error, Result};
pub use medium::{make_medium_params, MediumParams, SolitonConfig};
pub use schedule::ControlSchedule;
