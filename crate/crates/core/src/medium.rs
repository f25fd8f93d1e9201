//! Atomic medium constants and the soliton configuration built on top of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::ControlSchedule;

/// Ratio below which `eps0 / gamma` makes the relaxing soliton unreliable
/// even inside its full-width at half-maximum.
pub const EPS0_GAMMA_MIN_RATIO: f64 = 0.7;

/// Constants of the Λ medium and the spectral parameter of the soliton.
///
/// All quantities are SI: `nu0` in s⁻², `gamma` in s⁻¹, `delta` and `eps0`
/// in rad·s⁻¹. The spectral parameter is purely imaginary, λ = i·eps0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    nu0: f64,
    gamma: f64,
    delta: f64,
    eps0: f64,
}

impl MediumParams {
    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// |λ − Δ|² with λ = i·eps0.
    pub fn lambda_offset_sqr(&self) -> f64 {
        self.eps0 * self.eps0 + self.delta * self.delta
    }

    /// |λ − Δ|.
    pub fn lambda_offset(&self) -> f64 {
        self.lambda_offset_sqr().sqrt()
    }

    /// Dimensionless coupling k = ν₀ / (8 |λ − Δ|²), recomputed on every read.
    pub fn k(&self) -> f64 {
        self.nu0 / (8.0 * self.lambda_offset_sqr())
    }

    /// True when eps0 < 0.7·gamma, i.e. the approximate solution is not
    /// trustworthy across the soliton's FWHM.
    pub fn validity_warning(&self) -> bool {
        self.eps0 < EPS0_GAMMA_MIN_RATIO * self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        make_medium_params(self.nu0, gamma, self.delta, self.eps0)
    }
}

/// Validates the medium constants and packs them into [`MediumParams`].
pub fn make_medium_params(nu0: f64, gamma: f64, delta: f64, eps0: f64) -> Result<MediumParams> {
    if !(nu0.is_finite() && nu0 > 0.0) {
        return Err(Error::invalid("nu0", format!("must be positive and finite, got {nu0}")));
    }
    if !(eps0.is_finite() && eps0 > 0.0) {
        return Err(Error::invalid("eps0", format!("must be positive and finite, got {eps0}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid("gamma", format!("must be non-negative and finite, got {gamma}")));
    }
    if !delta.is_finite() {
        return Err(Error::invalid("delta", format!("must be finite, got {delta}")));
    }
    Ok(MediumParams {
        nu0,
        gamma,
        delta,
        eps0,
    })
}

/// Everything needed to evaluate one slow-light soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonConfig {
    /// Soliton center at τ = 0, in seconds of ζ. May be negative.
    pub zeta0: f64,
    pub medium: MediumParams,
    pub schedule: ControlSchedule,
}

impl SolitonConfig {
    pub fn new(zeta0: f64, medium: MediumParams, schedule: ControlSchedule) -> Self {
        SolitonConfig {
            zeta0,
            medium,
            schedule,
        }
    }

    /// The same soliton in a medium without relaxation.
    pub fn without_relaxation(&self) -> Self {
        SolitonConfig {
            zeta0: self.zeta0,
            medium: MediumParams {
                gamma: 0.0,
                ..self.medium
            },
            schedule: self.schedule.clone(),
        }
    }
}
