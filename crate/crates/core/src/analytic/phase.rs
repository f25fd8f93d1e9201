//! Phase of the excited-state amplitude from
//! ∂τφ₃ = −Δ + (|Ω_a|² ∂ζφ_a + |Ω_b|² ∂ζφ_b) / (2ν₀|ψ₃|²).

use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Samples along τ at one ζ that feed the φ₃ quadrature.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSources<'a> {
    pub taus: &'a [f64],
    pub abs_omega_a: &'a [f64],
    pub abs_omega_b: &'a [f64],
    pub dphi_a_dzeta: &'a [f64],
    pub dphi_b_dzeta: &'a [f64],
    pub psi3_abs: &'a [f64],
}

/// Cumulative trapezoid integration of ∂τφ₃, starting from `phi3_initial`.
pub fn phase3_quadrature(sources: PhaseSources<'_>, medium: &MediumParams, phi3_initial: f64) -> Result<Vec<f64>> {
    let n = sources.taus.len();
    let lens = [
        sources.abs_omega_a.len(),
        sources.abs_omega_b.len(),
        sources.dphi_a_dzeta.len(),
        sources.dphi_b_dzeta.len(),
        sources.psi3_abs.len(),
    ];
    if lens.iter().any(|&l| l != n) {
        return Err(Error::Shape(format!("{n} tau samples but source lengths {lens:?}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let rate = |i: usize| -> Result<f64> {
        let psi = sources.psi3_abs[i];
        if psi == 0.0 {
            return Err(Error::DivisionByZero(format!(
                "|psi3| = 0 at tau index {i} (tau = {:e} s); no soliton present",
                sources.taus[i]
            )));
        }
        let flux = sources.abs_omega_a[i].powi(2) * sources.dphi_a_dzeta[i]
            + sources.abs_omega_b[i].powi(2) * sources.dphi_b_dzeta[i];
        Ok(-medium.delta() + flux / (2.0 * medium.nu0() * psi * psi))
    };
    let mut out = Vec::with_capacity(n);
    out.push(phi3_initial);
    let mut prev = rate(0)?;
    for i in 1..n {
        let cur = rate(i)?;
        let h = sources.taus[i] - sources.taus[i - 1];
        out.push(out[i - 1] + 0.5 * h * (prev + cur));
        prev = cur;
    }
    Ok(out)
}
