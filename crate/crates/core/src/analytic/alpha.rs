//! The relaxation exponent α(τ), ∂τα = −(γ/2)/(p² + 1), α(0) = 0.

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::schedule::{hermite, ControlSchedule};

/// Largest γ·h/(p²+1) allowed by [`integrate_alpha_auto`].
pub const MAX_DECAY_PER_STEP: f64 = 1e-3;

const MIN_AUTO_STEPS: usize = 256;

/// α(τ) sampled on a uniform grid starting at τ = 0, together with the
/// running integral I(τ) = ∫₀^τ e^{2α}/(p²+1) dτ′ that drives the soliton
/// phase. Between samples both are evaluated by cubic Hermite interpolation
/// using the exact right-hand sides as node slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaTrajectory {
    taus: Vec<f64>,
    alphas: Vec<f64>,
    dalphas: Vec<f64>,
    drifts: Vec<f64>,
    ddrifts: Vec<f64>,
}

impl AlphaTrajectory {
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn tau_max(&self) -> f64 {
        self.taus[self.taus.len() - 1]
    }

    pub fn alpha(&self, tau: f64) -> Result<f64> {
        self.interp(tau, &self.alphas, &self.dalphas).map(|(v, _)| v)
    }

    /// ∂τα at `tau`.
    pub fn alpha_rate(&self, tau: f64) -> Result<f64> {
        self.interp(tau, &self.alphas, &self.dalphas).map(|(_, d)| d)
    }

    pub fn exp2alpha(&self, tau: f64) -> Result<f64> {
        self.alpha(tau).map(|a| (2.0 * a).exp())
    }

    /// I(τ) = ∫₀^τ e^{2α}/(p²+1) dτ′.
    pub fn drift_integral(&self, tau: f64) -> Result<f64> {
        self.interp(tau, &self.drifts, &self.ddrifts).map(|(v, _)| v)
    }

    fn interp(&self, tau: f64, values: &[f64], slopes: &[f64]) -> Result<(f64, f64)> {
        let n = self.taus.len();
        let hi = self.taus[n - 1];
        let tol = 1e-12 * hi;
        if !(tau >= -tol && tau <= hi + tol) {
            return Err(Error::Domain { tau, lo: 0.0, hi });
        }
        let tau = tau.clamp(0.0, hi);
        let h = hi / (n - 1) as f64;
        let i = ((tau / h) as usize).min(n - 2);
        if tau == self.taus[i] {
            return Ok((values[i], slopes[i]));
        }
        Ok(hermite(
            self.taus[i],
            self.taus[i + 1],
            values[i],
            values[i + 1],
            slopes[i],
            slopes[i + 1],
            tau,
        ))
    }
}

fn rhs(gamma: f64, schedule: &ControlSchedule, tau: f64, alpha: f64) -> Result<(f64, f64)> {
    let (p, _) = schedule.eval(tau)?;
    let w = 1.0 / (p * p + 1.0);
    Ok((-0.5 * gamma * w, (2.0 * alpha).exp() * w))
}

/// Classical RK4 quadrature of α and I on `n_steps` uniform steps over
/// `[0, tau_max]`.
pub fn integrate_alpha(
    medium: &MediumParams,
    schedule: &ControlSchedule,
    tau_max: f64,
    n_steps: usize,
) -> Result<AlphaTrajectory> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::invalid("tau_max", format!("must be positive, got {tau_max}")));
    }
    if n_steps < 2 {
        return Err(Error::invalid("n_steps", format!("need at least 2, got {n_steps}")));
    }
    let (lo, hi) = schedule.domain();
    if lo > 0.0 {
        return Err(Error::Domain { tau: 0.0, lo, hi });
    }
    if hi < tau_max {
        return Err(Error::Domain { tau: tau_max, lo, hi });
    }

    let gamma = medium.gamma();
    let h = tau_max / n_steps as f64;
    let mut taus = Vec::with_capacity(n_steps + 1);
    let mut alphas = Vec::with_capacity(n_steps + 1);
    let mut dalphas = Vec::with_capacity(n_steps + 1);
    let mut drifts = Vec::with_capacity(n_steps + 1);
    let mut ddrifts = Vec::with_capacity(n_steps + 1);

    let (mut a, mut d) = (0.0f64, 0.0f64);
    for i in 0..=n_steps {
        let tau = if i == n_steps { tau_max } else { i as f64 * h };
        let (da, dd) = rhs(gamma, schedule, tau, a)?;
        taus.push(tau);
        alphas.push(a);
        drifts.push(d);
        dalphas.push(da);
        ddrifts.push(dd);
        if i == n_steps {
            break;
        }
        let (k1a, k1d) = (da, dd);
        let (k2a, k2d) = rhs(gamma, schedule, tau + 0.5 * h, a + 0.5 * h * k1a)?;
        let (k3a, k3d) = rhs(gamma, schedule, tau + 0.5 * h, a + 0.5 * h * k2a)?;
        let (k4a, k4d) = rhs(gamma, schedule, tau + h, a + h * k3a)?;
        a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }

    Ok(AlphaTrajectory {
        taus,
        alphas,
        dalphas,
        drifts,
        ddrifts,
    })
}

/// [`integrate_alpha`] with the step chosen so that γ·h/(p_min² + 1) ≤ 1e−3.
pub fn integrate_alpha_auto(
    medium: &MediumParams,
    schedule: &ControlSchedule,
    tau_max: f64,
) -> Result<AlphaTrajectory> {
    let p_min = schedule.min_abs_p(tau_max)?;
    let needed = medium.gamma() * tau_max / ((p_min * p_min + 1.0) * MAX_DECAY_PER_STEP);
    let n_steps = (needed.ceil() as usize).max(MIN_AUTO_STEPS);
    integrate_alpha(medium, schedule, tau_max, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::make_medium_params;
    use approx::assert_relative_eq;

    #[test]
    fn vanishes_without_relaxation() {
        let m = make_medium_params(8.0, 0.0, 0.0, 1.0).unwrap();
        let s = ControlSchedule::smooth_ramp(0.5, 3.0, 1.0, 4.0).unwrap();
        let a = integrate_alpha(&m, &s, 10.0, 100).unwrap();
        assert!(a.alphas().iter().all(|&x| x == 0.0));
        assert_eq!(a.alpha(7.3).unwrap(), 0.0);
    }

    #[test]
    fn sodium_decay_factor() {
        let gamma = 6.3e7;
        let m = make_medium_params(5.0e21, gamma, 0.0, 5.7 * gamma).unwrap();
        let s = ControlSchedule::constant(18.4).unwrap();
        let a = integrate_alpha_auto(&m, &s, 10e-6).unwrap();
        let expected = (-gamma * 8.3e-6 / (18.4f64.powi(2) + 1.0)).exp();
        assert_relative_eq!(a.exp2alpha(8.3e-6).unwrap(), expected, max_relative = 1e-12);
        assert_relative_eq!(expected, 0.214, max_relative = 2e-3);
    }

    #[test]
    fn unit_rate_without_control() {
        let m = make_medium_params(8.0, 1.0, 0.0, 1.0).unwrap();
        let s = ControlSchedule::constant(0.0).unwrap();
        let a = integrate_alpha(&m, &s, 2.0, 16).unwrap();
        assert_relative_eq!(a.alpha(2.0).unwrap(), -1.0, max_relative = 1e-14);
    }

    #[test]
    fn drift_integral_matches_closed_form() {
        // I(τ) = (1 − e^{2α})/γ for any schedule.
        let gamma = 0.7;
        let m = make_medium_params(8.0, gamma, 0.0, 1.0).unwrap();
        let s = ControlSchedule::smooth_ramp(0.2, 1.5, 0.5, 3.0).unwrap();
        let a = integrate_alpha(&m, &s, 5.0, 2000).unwrap();
        for &tau in &[0.0, 0.31, 1.7, 2.9, 4.99, 5.0] {
            let closed = -(2.0 * a.alpha(tau).unwrap()).exp_m1() / gamma;
            assert!((a.drift_integral(tau).unwrap() - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn fourth_order_against_reference_quadrature() {
        // Oracle: composite Simpson quadrature on a very fine grid of the same
        // integrand, independent of the RK4 stepping.
        let gamma = 2.0;
        let m = make_medium_params(8.0, gamma, 0.0, 1.0).unwrap();
        let s = ControlSchedule::smooth_ramp(0.0, 2.0, 0.0, 3.0).unwrap();
        let n_fine = 200_000;
        let h = 3.0 / n_fine as f64;
        let f = |t: f64| {
            let p = s.eval(t).unwrap().0;
            -0.5 * gamma / (p * p + 1.0)
        };
        let mut simpson = f(0.0) + f(3.0);
        for i in 1..n_fine {
            simpson += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let reference = simpson * h / 3.0;
        let errs: Vec<f64> = [15usize, 30, 60]
            .iter()
            .map(|&n| (integrate_alpha(&m, &s, 3.0, n).unwrap().alpha(3.0).unwrap() - reference).abs())
            .collect();
        assert!(errs[0] / errs[1] > 12.0, "{errs:?}");
        assert!(errs[1] / errs[2] > 12.0, "{errs:?}");
    }

    #[test]
    fn schedule_domain_too_short() {
        let m = make_medium_params(8.0, 1.0, 0.0, 1.0).unwrap();
        let s = ControlSchedule::tabulated(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(integrate_alpha(&m, &s, 2.0, 10), Err(Error::Domain { .. })));
        assert!(integrate_alpha(&m, &s, 1.0, 10).is_ok());
    }

    #[test]
    fn rejects_degenerate_grid() {
        let m = make_medium_params(8.0, 1.0, 0.0, 1.0).unwrap();
        let s = ControlSchedule::constant(1.0).unwrap();
        assert!(integrate_alpha(&m, &s, 1.0, 1).is_err());
        assert!(integrate_alpha(&m, &s, 0.0, 10).is_err());
        let a = integrate_alpha(&m, &s, 1.0, 10).unwrap();
        assert!(a.alpha(1.5).is_err());
    }
}
