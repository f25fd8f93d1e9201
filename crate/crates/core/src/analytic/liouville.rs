//! General solution of the Liouville equation ∂ζτρ̃ = −k e^{−2ρ̃}.
//!
//! For arbitrary A₊(ζ), A₋(τ) with A₊′A₋′ > 0 and A₊A₋ < 1,
//!
//! ```text
//! e^{−2ρ̃} = (1/k) A₊′ A₋′ / (1 − A₊A₋)²,     ρ = ρ̃ − α.
//! ```
//!
//! The soliton uses A₊ = −exp[−8ε₀k(ζ − ζ₀)] and A₋ = exp[2ε₀ I(τ)].

use std::fmt;
use std::sync::Arc;

use super::soliton::AnalyticSoliton;
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct LiouvilleData {
    pub a_plus: ScalarFn,
    pub da_plus: ScalarFn,
    pub a_minus: ScalarFn,
    pub da_minus: ScalarFn,
    /// α(τ); only used to convert ρ̃ back to ρ.
    pub alpha: ScalarFn,
    pub k: f64,
}

impl fmt::Debug for LiouvilleData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LiouvilleData").field("k", &self.k).finish_non_exhaustive()
    }
}

impl LiouvilleData {
    /// A₊, A₋ that reproduce the slow-light soliton. α and I(τ) are read
    /// from the soliton's trajectory; evaluation outside it yields NaN.
    pub fn from_soliton(soliton: &AnalyticSoliton) -> Self {
        let m = soliton.config().medium;
        let (eps0, k, zeta0) = (m.eps0(), m.k(), soliton.config().zeta0);
        let rate = 8.0 * eps0 * k;
        let s_int = Arc::new(soliton.clone());
        let s_der = Arc::clone(&s_int);
        let s_alpha = Arc::clone(&s_int);
        LiouvilleData {
            a_plus: Arc::new(move |zeta| -(-rate * (zeta - zeta0)).exp()),
            da_plus: Arc::new(move |zeta| rate * (-rate * (zeta - zeta0)).exp()),
            a_minus: Arc::new(move |tau| {
                (2.0 * eps0 * s_int.alpha().drift_integral(tau).unwrap_or(f64::NAN)).exp()
            }),
            da_minus: Arc::new(move |tau| {
                let drift = s_der.alpha().drift_integral(tau).unwrap_or(f64::NAN);
                let e2a = s_der.alpha().exp2alpha(tau).unwrap_or(f64::NAN);
                let p = s_der.config().schedule.eval(tau).map(|v| v.0).unwrap_or(f64::NAN);
                2.0 * eps0 * e2a / (p * p + 1.0) * (2.0 * eps0 * drift).exp()
            }),
            alpha: Arc::new(move |tau| s_alpha.alpha().alpha(tau).unwrap_or(f64::NAN)),
            k,
        }
    }
}

/// ρ̃(τ, ζ) from the general solution.
pub fn liouville_rho(data: &LiouvilleData, tau: f64, zeta: f64) -> Result<f64> {
    let product = (data.a_plus)(zeta) * (data.a_minus)(tau);
    if !(product < 1.0) {
        return Err(Error::Singularity { product });
    }
    let numerator = (data.da_plus)(zeta) * (data.da_minus)(tau) / data.k;
    if !(numerator > 0.0) {
        return Err(Error::invalid(
            "liouville",
            format!("A+' A-' / k must be positive, got {numerator:e}"),
        ));
    }
    Ok(-0.5 * numerator.ln() + (1.0 - product).ln())
}

/// ρ = ρ̃ − α, i.e. −ln |Ω_a|.
pub fn liouville_rho_plain(data: &LiouvilleData, tau: f64, zeta: f64) -> Result<f64> {
    Ok(liouville_rho(data, tau, zeta)? - (data.alpha)(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::alpha::integrate_alpha;
    use crate::medium::{make_medium_params, SolitonConfig};
    use crate::schedule::ControlSchedule;
    use approx::assert_relative_eq;

    fn soliton(gamma: f64) -> AnalyticSoliton {
        let m = make_medium_params(8.0 * 1.7, gamma, 0.0, 1.0).unwrap();
        let cfg = SolitonConfig::new(0.4, m, ControlSchedule::constant(1.3).unwrap());
        let alpha = integrate_alpha(&cfg.medium, &cfg.schedule, 20.0, 4000).unwrap();
        AnalyticSoliton::from_parts(cfg, alpha)
    }

    #[test]
    fn reproduces_probe_field() {
        for &gamma in &[0.0, 0.25] {
            let s = soliton(gamma);
            let data = LiouvilleData::from_soliton(&s);
            for &tau in &[0.0, 1.3, 7.0] {
                for &zeta in &[-0.5, 0.4, 1.1] {
                    let rho = liouville_rho_plain(&data, tau, zeta).unwrap();
                    let f = s.fields(tau, zeta).unwrap();
                    assert_relative_eq!((-rho).exp(), f.omega_a, max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn singular_product() {
        let data = LiouvilleData {
            a_plus: Arc::new(|z| z),
            da_plus: Arc::new(|_| 1.0),
            a_minus: Arc::new(|t| t),
            da_minus: Arc::new(|_| 1.0),
            alpha: Arc::new(|_| 0.0),
            k: 1.0,
        };
        assert!(liouville_rho(&data, 0.5, 0.5).is_ok());
        assert!(matches!(liouville_rho(&data, 2.0, 0.5), Err(Error::Singularity { .. })));
        assert!(matches!(liouville_rho(&data, 2.0, 2.0), Err(Error::Singularity { .. })));
    }

    #[test]
    fn soliton_data_invariants() {
        let s = soliton(0.25);
        let data = LiouvilleData::from_soliton(&s);
        let mut prev_plus = f64::NEG_INFINITY;
        let mut prev_minus = 0.0;
        for i in 0..200 {
            let x = -2.0 + i as f64 * 0.02;
            let ap = (data.a_plus)(x);
            assert!(ap < 0.0 && ap > prev_plus);
            prev_plus = ap;
            let am = (data.a_minus)(i as f64 * 0.1);
            assert!(am > 0.0 && am >= prev_minus);
            prev_minus = am;
            assert!(ap * am < 1.0);
        }
    }
}
