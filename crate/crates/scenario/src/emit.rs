//! CSV plot data. Floats are written in shortest round-trip form.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ScenarioError, ScenarioResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub tau_s: f64,
    pub zeta_s: f64,
    pub z_m: f64,
    pub abs_omega_a: f64,
    pub arg_omega_a: f64,
    pub abs_omega_b: f64,
    pub arg_omega_b: f64,
    pub abs_psi3: f64,
}

impl SnapshotRow {
    pub fn new(tau: f64, zeta: f64, z: f64, omega_a: Complex64, omega_b: Complex64, psi3_abs: f64) -> Self {
        SnapshotRow {
            tau_s: tau,
            zeta_s: zeta,
            z_m: z,
            abs_omega_a: omega_a.norm(),
            arg_omega_a: omega_a.arg(),
            abs_omega_b: omega_b.norm(),
            arg_omega_b: omega_b.arg(),
            abs_psi3: psi3_abs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub tau_s: f64,
    pub zeta_c_s: f64,
    pub z_c_m: f64,
    pub v_lab_mps: f64,
    pub peak_omega_a: f64,
    pub decay_ratio: f64,
    pub validity_margin: f64,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> ScenarioResult<()> {
    let wrap = |source| ScenarioError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    for row in rows {
        w.serialize(row).map_err(wrap)?;
    }
    w.flush().map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> ScenarioResult<Vec<T>> {
    let wrap = |source| ScenarioError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    r.deserialize().collect::<Result<_, _>>().map_err(wrap)
}
