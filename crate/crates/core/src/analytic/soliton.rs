//! Field engine for the relaxing slow-light soliton.
//!
//! With φ = −4kε₀(ζ − ζ₀) + ε₀(1 − e^{2α})/γ the fields are
//!
//! ```text
//! Ω_a = 2ε₀ e^{2α} sech φ / √(p² + 1)
//! Ω_b = −2ε₀ p e^{2α} tanh φ / (p² + 1) + (2∂τp − γp) / (p² + 1)
//! ```
//!
//! and the soliton center moves as ζ_c = ζ₀ + (1 − e^{2α})/(4kγ).

use serde::{Deserialize, Serialize};

use super::alpha::{integrate_alpha_auto, AlphaTrajectory};
use crate::coords::SPEED_OF_LIGHT;
use crate::error::Result;
use crate::medium::SolitonConfig;

/// Below `GAMMA_LIMIT_RATIO · eps0` the (1 − e^{2α})/γ term is replaced by
/// its quadrature form I(τ), which stays finite as γ → 0.
pub const GAMMA_LIMIT_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonFieldSample {
    /// Probe Rabi frequency, real and non-negative in this gauge.
    pub omega_a: f64,
    pub omega_b: f64,
    pub psi3_abs: f64,
    pub phi: f64,
}

impl SolitonFieldSample {
    /// ρ = −ln |Ω_a|.
    pub fn rho(&self) -> f64 {
        -self.omega_a.abs().ln()
    }

    /// η = Ω_b.
    pub fn eta(&self) -> f64 {
        self.omega_b
    }

    /// ρ̃ = ρ + α.
    pub fn rho_tilde(&self, alpha: f64) -> f64 {
        self.rho() + alpha
    }
}

/// Distance travelled by the center in ζ-seconds, times 4k:
/// (1 − e^{2α})/γ, or I(τ) in the γ → 0 limit.
pub(crate) fn phase_drift(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64) -> Result<f64> {
    let m = &config.medium;
    if m.gamma() < GAMMA_LIMIT_RATIO * m.eps0() {
        alpha.drift_integral(tau)
    } else {
        Ok(-(2.0 * alpha.alpha(tau)?).exp_m1() / m.gamma())
    }
}

pub fn soliton_phase(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64, zeta: f64) -> Result<f64> {
    let m = &config.medium;
    let drift = phase_drift(config, alpha, tau)?;
    Ok(-4.0 * m.k() * m.eps0() * (zeta - config.zeta0) + m.eps0() * drift)
}

pub fn soliton_fields(
    config: &SolitonConfig,
    alpha: &AlphaTrajectory,
    tau: f64,
    zeta: f64,
) -> Result<SolitonFieldSample> {
    let m = &config.medium;
    let eps0 = m.eps0();
    let (p, dp) = config.schedule.eval(tau)?;
    let a = alpha.alpha(tau)?;
    let e2a = (2.0 * a).exp();
    let q = p * p + 1.0;
    let phi = soliton_phase(config, alpha, tau, zeta)?;
    let sech = 1.0 / phi.cosh();
    let omega_a = 2.0 * eps0 * e2a * sech / q.sqrt();
    let omega_b = -2.0 * eps0 * p * e2a * phi.tanh() / q + (2.0 * dp - m.gamma() * p) / q;
    let psi3_abs = omega_a * (-a).exp() / (2.0 * m.lambda_offset());
    Ok(SolitonFieldSample {
        omega_a,
        omega_b,
        psi3_abs,
        phi,
    })
}

/// ζ_c(τ) = ζ₀ + (1 − e^{2α})/(4kγ).
pub fn soliton_center(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64) -> Result<f64> {
    let drift = phase_drift(config, alpha, tau)?;
    Ok(config.zeta0 + drift / (4.0 * config.medium.k()))
}

/// Returns `(v_retarded, v_lab)`: dζ_c/dτ (dimensionless) and the
/// laboratory speed in m/s.
pub fn group_velocity(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64) -> Result<(f64, f64)> {
    let (p, _) = config.schedule.eval(tau)?;
    let v = alpha.exp2alpha(tau)? / (4.0 * config.medium.k() * (p * p + 1.0));
    Ok((v, SPEED_OF_LIGHT * v / (1.0 + v)))
}

/// Peak probe amplitude 2ε₀e^{2α}/√(p² + 1) at retarded time `tau`.
pub fn peak_amplitude(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64) -> Result<f64> {
    let (p, _) = config.schedule.eval(tau)?;
    Ok(2.0 * config.medium.eps0() * alpha.exp2alpha(tau)? / (p * p + 1.0).sqrt())
}

/// A soliton configuration bundled with its α trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSoliton {
    config: SolitonConfig,
    alpha: AlphaTrajectory,
}

impl AnalyticSoliton {
    /// Integrates α over `[0, tau_max]` with the automatic step rule.
    pub fn new(config: SolitonConfig, tau_max: f64) -> Result<Self> {
        let alpha = integrate_alpha_auto(&config.medium, &config.schedule, tau_max)?;
        Ok(AnalyticSoliton { config, alpha })
    }

    pub fn from_parts(config: SolitonConfig, alpha: AlphaTrajectory) -> Self {
        AnalyticSoliton { config, alpha }
    }

    pub fn config(&self) -> &SolitonConfig {
        &self.config
    }

    pub fn alpha(&self) -> &AlphaTrajectory {
        &self.alpha
    }

    /// The γ = 0 reference pulse with the same ε₀, schedule, k and ζ₀.
    pub fn reference(&self) -> Result<Self> {
        AnalyticSoliton::new(self.config.without_relaxation(), self.alpha.tau_max())
    }

    pub fn fields(&self, tau: f64, zeta: f64) -> Result<SolitonFieldSample> {
        soliton_fields(&self.config, &self.alpha, tau, zeta)
    }

    pub fn phase(&self, tau: f64, zeta: f64) -> Result<f64> {
        soliton_phase(&self.config, &self.alpha, tau, zeta)
    }

    pub fn center(&self, tau: f64) -> Result<f64> {
        soliton_center(&self.config, &self.alpha, tau)
    }

    pub fn velocity(&self, tau: f64) -> Result<(f64, f64)> {
        group_velocity(&self.config, &self.alpha, tau)
    }

    pub fn peak_amplitude(&self, tau: f64) -> Result<f64> {
        peak_amplitude(&self.config, &self.alpha, tau)
    }
}
