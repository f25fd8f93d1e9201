//! Recover (p₀, ε₀) from the entrance control field Ω₀ and the pulse length t_p.
//!
//! Two conditions fix the soliton:
//!
//! ```text
//! Ω₀ = (2ε₀ − γ) p₀ / (p₀² + 1)                (background control field)
//! sech(ε₀ t_p / (2(p₀² + 1))) = 1/2            (t_p is the entrance FWHM)
//! ```
//!
//! The second gives ε₀(p₀) = 2·arcsech(1/2)·(p₀² + 1)/t_p in closed form,
//! leaving a scalar root-find in p₀.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::EPS0_GAMMA_MIN_RATIO;

/// arcsech(1/2) = ln(2 + √3).
pub const ARCSECH_HALF: f64 = 1.316_957_896_924_816_6;

pub const SCAN_MIN: f64 = 1e-3;
pub const SCAN_MAX: f64 = 1e5;
const SCAN_POINTS: usize = 4001;
const ROOT_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentInputs {
    /// Background control Rabi frequency Ω₀ [rad/s].
    pub omega0: f64,
    /// Pulse duration, FWHM of the sech amplitude [s].
    pub t_p: f64,
    pub gamma: f64,
    /// Reported pulse delay Δt [s].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub p0: f64,
    pub eps0: f64,
    pub gamma_star: f64,
    pub tau_rel_star: f64,
    /// eps0 ≥ 0.7·gamma.
    pub validity_ok: bool,
    /// Relative residual of the background-field condition.
    pub bg_field_residual: f64,
    /// Relative residual of the width condition.
    pub time_width_residual: f64,
    /// The other root 1/p₀ of the background-field quadratic at this ε₀.
    pub quadratic_partner: f64,
    /// Every admissible root found by the scan, ascending; `p0` is the largest.
    pub roots: Vec<f64>,
}

/// ε₀ that makes `t_p` the FWHM for a given p₀.
pub fn eps0_for_width(p0: f64, t_p: f64) -> f64 {
    2.0 * ARCSECH_HALF * (p0 * p0 + 1.0) / t_p
}

/// Ω₀ implied by (p₀, ε₀).
pub fn background_field(p0: f64, eps0: f64, gamma: f64) -> f64 {
    (2.0 * eps0 - gamma) * p0 / (p0 * p0 + 1.0)
}

pub fn effective_gamma(gamma: f64, p0: f64) -> f64 {
    gamma / (p0 * p0 + 1.0)
}

/// Peak-amplitude ratio e^{−γ*τ} of the relaxing soliton against the γ = 0
/// reference.
pub fn decay_ratio(gamma_star: f64, tau: f64) -> f64 {
    (-gamma_star * tau).exp()
}

fn validate(inputs: &ExperimentInputs) -> Result<()> {
    if !(inputs.t_p.is_finite() && inputs.t_p > 0.0) {
        return Err(Error::invalid("t_p", format!("must be positive, got {}", inputs.t_p)));
    }
    if !(inputs.gamma.is_finite() && inputs.gamma >= 0.0) {
        return Err(Error::invalid("gamma", format!("must be non-negative, got {}", inputs.gamma)));
    }
    if !inputs.omega0.is_finite() {
        return Err(Error::invalid("omega0", "must be finite"));
    }
    if let Some(dt) = inputs.delta_t {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("delta_t", format!("must be positive, got {dt}")));
        }
    }
    Ok(())
}

pub fn calibrate(inputs: &ExperimentInputs) -> Result<CalibrationResult> {
    validate(inputs)?;
    let ExperimentInputs { omega0, t_p, gamma, .. } = *inputs;
    if omega0 <= 0.0 {
        return Err(Error::NoSolution(format!(
            "omega0 = {omega0:e} admits no root with p0 > 0 and 2 eps0 > gamma (scanned p0 in [{SCAN_MIN:e}, {SCAN_MAX:e}])"
        )));
    }
    let residual = |p: f64| background_field(p, eps0_for_width(p, t_p), gamma) - omega0;

    let mut roots = Vec::new();
    if let Some(seed) = seed_guess(inputs) {
        if let Some((lo, hi)) = expand_bracket(&residual, seed) {
            roots.push(find_root(&residual, lo, hi)?);
        }
    }
    let (scanned, f_range) = scan_roots(&residual)?;
    for r in scanned {
        if roots.iter().all(|&q: &f64| ((q - r) / r).abs() > 1e-9) {
            roots.push(r);
        }
    }
    roots.retain(|&p| p > 0.0 && 2.0 * eps0_for_width(p, t_p) > gamma);
    roots.sort_by(|a, b| a.total_cmp(b));
    let Some(&p0) = roots.last() else {
        return Err(Error::NoSolution(format!(
            "no sign change of the background-field residual for p0 in [{SCAN_MIN:e}, {SCAN_MAX:e}]; residual ranged over [{:e}, {:e}] rad/s",
            f_range.0, f_range.1
        )));
    };

    let eps0 = eps0_for_width(p0, t_p);
    let gamma_star = effective_gamma(gamma, p0);
    let width_arg = eps0 * t_p / (2.0 * (p0 * p0 + 1.0));
    Ok(CalibrationResult {
        p0,
        eps0,
        gamma_star,
        tau_rel_star: 1.0 / gamma_star,
        validity_ok: eps0 >= EPS0_GAMMA_MIN_RATIO * gamma,
        bg_field_residual: ((background_field(p0, eps0, gamma) - omega0) / omega0).abs(),
        time_width_residual: ((1.0 / width_arg.cosh() - 0.5) / 0.5).abs(),
        quadratic_partner: 1.0 / p0,
        roots,
    })
}

/// Large-p₀ form p₀ ≈ (2ε₀ − γ)/Ω₀ combined with ε₀(p₀): a quadratic in p₀
/// whose larger root seeds the bracket.
fn seed_guess(inputs: &ExperimentInputs) -> Option<f64> {
    let a = 4.0 * ARCSECH_HALF / inputs.t_p;
    let disc = inputs.omega0 * inputs.omega0 - 4.0 * a * (a - inputs.gamma);
    if disc < 0.0 {
        return None;
    }
    let p = (inputs.omega0 + disc.sqrt()) / (2.0 * a);
    (p > 0.0 && p.is_finite()).then_some(p)
}

fn expand_bracket(f: &impl Fn(f64) -> f64, seed: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (seed / 1.5, seed * 1.5);
    while lo >= SCAN_MIN || hi <= SCAN_MAX {
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            return Some((lo, lo));
        }
        if fhi == 0.0 {
            return Some((hi, hi));
        }
        if flo.signum() != fhi.signum() {
            return Some((lo, hi));
        }
        lo /= 2.0;
        hi *= 2.0;
    }
    None
}

fn scan_roots(f: &impl Fn(f64) -> f64) -> Result<(Vec<f64>, (f64, f64))> {
    let ratio = (SCAN_MAX / SCAN_MIN).ln() / (SCAN_POINTS - 1) as f64;
    let mut roots = Vec::new();
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..SCAN_POINTS {
        let p = SCAN_MIN * (ratio * i as f64).exp();
        let v = f(p);
        range = (range.0.min(v), range.1.max(v));
        if v == 0.0 {
            roots.push(p);
        } else if let Some((pp, pv)) = prev {
            if pv != 0.0 && pv.signum() != v.signum() {
                roots.push(find_root(f, pp, p)?);
            }
        }
        prev = Some((p, v));
    }
    Ok((roots, range))
}

/// Bisection down to a narrow bracket, then bracket-safeguarded secant to
/// 1e−12 relative.
fn find_root(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    if a == b {
        return Ok(a);
    }
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSolution(format!("[{a:e}, {b:e}] does not bracket a root")));
    }
    for _ in 0..60 {
        if (b - a) <= 1e-6 * b.abs() {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..100 {
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        let f2 = f(x2);
        if f2 == 0.0 || (x2 - x1).abs() <= ROOT_REL_TOL * x2.abs() {
            return Ok(x2);
        }
        if f2.signum() == fa.signum() {
            a = x2;
            fa = f2;
        } else {
            b = x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (b - a) <= ROOT_REL_TOL * b.abs() {
            return Ok(0.5 * (a + b));
        }
    }
    Ok(x1)
}

/// Roots of Ω₀p² − (2ε₀ − γ)p + Ω₀ = 0 at fixed ε₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P0Approximation {
    /// Larger root b + √(b² − 1), b = (2ε₀ − γ)/(2Ω₀).
    pub exact: f64,
    /// Smaller root b − √(b² − 1) = 1/exact.
    pub partner: f64,
    /// (2ε₀ − γ)/Ω₀.
    pub simplified: f64,
}

pub fn p0_approximation(omega0: f64, gamma: f64, eps0: f64) -> Result<P0Approximation> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::invalid("omega0", format!("must be positive, got {omega0}")));
    }
    let gap = 2.0 * eps0 - gamma;
    if !(gap > 0.0) {
        return Err(Error::invalid("eps0", format!("need 2 eps0 > gamma, got 2 eps0 - gamma = {gap:e}")));
    }
    let b = gap / (2.0 * omega0);
    let discriminant = b * b - 1.0;
    if discriminant < 0.0 {
        return Err(Error::NoRealRoot { discriminant });
    }
    let exact = b + discriminant.sqrt();
    Ok(P0Approximation {
        exact,
        partner: 1.0 / exact,
        simplified: gap / omega0,
    })
}
