//! How far from the soliton center the slowly-relaxing approximation holds,
//! and how far the soliton can travel before relaxation stops it.

use serde::{Deserialize, Serialize};

use super::alpha::AlphaTrajectory;
use super::soliton::{soliton_center, soliton_phase};
use crate::coords::SPEED_OF_LIGHT;
use crate::error::Result;
use crate::medium::{MediumParams, SolitonConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub tau: f64,
    pub zeta_c: f64,
    /// Δζ solving |sinh(8kε₀Δζ)| = 16ε₀e^{2α}/γ; infinite for γ = 0.
    pub half_width: f64,
    /// Full width at half maximum of Ω_a in ζ-seconds.
    pub w_s: f64,
    /// half_width / (w_s / 2).
    pub margin: f64,
    /// Stopping distance 1/(4kγ) in ζ-seconds.
    pub max_distance_zeta: f64,
    pub max_distance_m: f64,
}

/// w_s = 2·arcsech(1/2)/(4kε₀) = ln(2 + √3)/(2kε₀) ≈ 0.6585/(kε₀).
pub fn fwhm(medium: &MediumParams) -> f64 {
    2.0f64.acosh() / (2.0 * medium.k() * medium.eps0())
}

/// 1/(4kγ), the upper bound on ζ_c(τ) − ζ₀.
pub fn max_distance(medium: &MediumParams) -> f64 {
    if medium.gamma() == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (4.0 * medium.k() * medium.gamma())
    }
}

pub fn validity_report(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64) -> Result<ValidityReport> {
    let m = &config.medium;
    let zeta_c = soliton_center(config, alpha, tau)?;
    let w_s = fwhm(m);
    let half_width = if m.gamma() == 0.0 {
        f64::INFINITY
    } else {
        let rhs = 16.0 * m.eps0() * alpha.exp2alpha(tau)? / m.gamma();
        rhs.asinh() / (8.0 * m.k() * m.eps0())
    };
    let max_distance_zeta = max_distance(m);
    Ok(ValidityReport {
        tau,
        zeta_c,
        half_width,
        w_s,
        margin: half_width / (0.5 * w_s),
        max_distance_zeta,
        max_distance_m: SPEED_OF_LIGHT * max_distance_zeta,
    })
}

/// γ|sinh 2φ| / (16ε₀e^{2α}): the approximation is trusted where this is
/// small. Equals 1 on the edge of the window reported by [`validity_report`].
pub fn approximation_ratio(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64, zeta: f64) -> Result<f64> {
    let m = &config.medium;
    let phi = soliton_phase(config, alpha, tau, zeta)?;
    Ok(m.gamma() * (2.0 * phi).sinh().abs() / (16.0 * m.eps0() * alpha.exp2alpha(tau)?))
}

/// |∂τα ∂ζρ̃| / (k e^{−2ρ̃}): the dropped term of the ρ̃ equation relative to
/// the kept Liouville source, evaluated on the approximate solution. Works
/// out to γ|sinh 2φ| / (4ε₀e^{2α}).
pub fn neglected_term_ratio(config: &SolitonConfig, alpha: &AlphaTrajectory, tau: f64, zeta: f64) -> Result<f64> {
    let m = &config.medium;
    let (p, _) = config.schedule.eval(tau)?;
    let q = p * p + 1.0;
    let phi = soliton_phase(config, alpha, tau, zeta)?;
    let e2a = alpha.exp2alpha(tau)?;
    let rate = alpha.alpha_rate(tau)?;
    let drho = 4.0 * m.k() * m.eps0() * phi.tanh();
    let source = 4.0 * m.k() * m.eps0() * m.eps0() * e2a / (phi.cosh().powi(2) * q);
    Ok((rate * drho).abs() / source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::soliton::AnalyticSoliton;
    use crate::medium::make_medium_params;
    use crate::schedule::ControlSchedule;
    use approx::assert_relative_eq;

    fn sodium() -> AnalyticSoliton {
        let gamma = 6.3e7;
        let eps0 = 5.7 * gamma;
        let k = 4.9e3;
        let m = make_medium_params(8.0 * k * eps0 * eps0, gamma, 0.0, eps0).unwrap();
        let cfg = SolitonConfig::new(0.0, m, ControlSchedule::constant(18.4).unwrap());
        AnalyticSoliton::new(cfg, 20e-6).unwrap()
    }

    #[test]
    fn fwhm_law() {
        let m = make_medium_params(8.0, 0.0, 0.0, 1.0).unwrap();
        assert!((fwhm(&m) * m.k() * m.eps0() - 0.6585).abs() < 5e-4);
        // Half maximum of sech at ±w_s/2.
        let s = AnalyticSoliton::new(SolitonConfig::new(0.0, m, ControlSchedule::constant(0.0).unwrap()), 1.0).unwrap();
        let half = s.fields(0.0, 0.5 * fwhm(&m)).unwrap().omega_a;
        assert_relative_eq!(half, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn sodium_window_at_entrance() {
        let s = sodium();
        let r = validity_report(s.config(), s.alpha(), 0.0).unwrap();
        let m = &s.config().medium;
        let expected = (16.0f64 * 5.7).asinh() / 8.0;
        assert_relative_eq!(r.half_width * m.k() * m.eps0(), expected, max_relative = 1e-12);
        assert!((expected - 0.65).abs() < 0.01);
        assert!((r.margin - 2.0).abs() < 0.05, "{}", r.margin);
    }

    #[test]
    fn sodium_stopping_distance() {
        let s = sodium();
        let r = validity_report(s.config(), s.alpha(), 0.0).unwrap();
        assert_relative_eq!(r.max_distance_zeta, 1.0 / (4.0 * 4.9e3 * 6.3e7), max_relative = 1e-12);
        assert!((r.max_distance_m - 2.4e-4).abs() < 0.05e-4, "{}", r.max_distance_m);
    }

    #[test]
    fn window_closes_with_time() {
        let s = sodium();
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let r = validity_report(s.config(), s.alpha(), i as f64 * 0.5e-6).unwrap();
            assert!(r.margin < prev);
            prev = r.margin;
        }
    }

    #[test]
    fn no_relaxation_means_unbounded() {
        let m = make_medium_params(8.0, 0.0, 0.0, 1.0).unwrap();
        let s = AnalyticSoliton::new(SolitonConfig::new(0.0, m, ControlSchedule::constant(1.0).unwrap()), 5.0).unwrap();
        let r = validity_report(s.config(), s.alpha(), 2.0).unwrap();
        assert!(r.half_width.is_infinite() && r.margin.is_infinite() && r.max_distance_m.is_infinite());
    }

    #[test]
    fn window_edge_and_center() {
        let s = sodium();
        for &tau in &[0.0, 3e-6, 8.3e-6] {
            let r = validity_report(s.config(), s.alpha(), tau).unwrap();
            let at_edge = approximation_ratio(s.config(), s.alpha(), tau, r.zeta_c + r.half_width).unwrap();
            assert_relative_eq!(at_edge, 1.0, max_relative = 1e-9);
            assert!(approximation_ratio(s.config(), s.alpha(), tau, r.zeta_c).unwrap() < 1e-12);
            let inside = approximation_ratio(s.config(), s.alpha(), tau, r.zeta_c + 0.5 * r.half_width).unwrap();
            assert!(inside < 1.0);
            let dropped = neglected_term_ratio(s.config(), s.alpha(), tau, r.zeta_c + 0.5 * r.half_width).unwrap();
            assert_relative_eq!(dropped, 4.0 * inside, max_relative = 1e-9);
        }
    }
}
