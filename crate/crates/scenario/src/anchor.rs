//! Fixing the coupling ν₀ from an observed stopping distance.

use serde::{Deserialize, Serialize};
use slowlight_core::analytic::integrate_alpha_auto;
use slowlight_core::calibration::CalibrationResult;
use slowlight_core::coords::SPEED_OF_LIGHT;
use slowlight_core::{make_medium_params, ControlSchedule, Error, Result};

use crate::config::DistanceAnchor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nu0Calibration {
    pub k: f64,
    pub nu0: f64,
    /// e^{2α} at the anchor time.
    pub exp2alpha_anchor: f64,
    /// Lab distance c/(4kγ) at which the soliton would come to rest [m].
    pub max_distance_m: f64,
}

/// Solves c·(1 − e^{2α(τ_D)})/(4kγ) = D for k and returns ν₀ = 8k(ε₀² + Δ²).
///
/// α depends only on γ and the schedule, so the relation is explicit in k.
pub fn calibrate_nu0(
    calibration: &CalibrationResult,
    gamma: f64,
    delta: f64,
    schedule: &ControlSchedule,
    anchor: DistanceAnchor,
) -> Result<Nu0Calibration> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "a distance anchor needs gamma > 0; without relaxation the soliton never stops".into(),
        });
    }
    if !(anchor.distance_m > 0.0 && anchor.tau_s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "distance_anchor",
            reason: "distance and time must be positive".into(),
        });
    }
    // ν₀ does not enter α; any positive placeholder will do.
    let probe = make_medium_params(1.0, gamma, delta, calibration.eps0)?;
    let alpha = integrate_alpha_auto(&probe, schedule, anchor.tau_s)?;
    let e2a = alpha.exp2alpha(anchor.tau_s)?;
    let travelled = -(2.0 * alpha.alpha(anchor.tau_s)?).exp_m1();
    if !(travelled > 0.0) {
        return Err(Error::NoSolution(format!(
            "e^(2 alpha) = {e2a} at tau = {:e} s leaves no distance to match",
            anchor.tau_s
        )));
    }
    let k = SPEED_OF_LIGHT * travelled / (4.0 * gamma * anchor.distance_m);
    let nu0 = 8.0 * k * (calibration.eps0 * calibration.eps0 + delta * delta);
    Ok(Nu0Calibration {
        k,
        nu0,
        exp2alpha_anchor: e2a,
        max_distance_m: SPEED_OF_LIGHT / (4.0 * k * gamma),
    })
}
