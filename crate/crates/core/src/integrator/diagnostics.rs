//! Finite-difference checks of a completed run against the conservation law
//! and the ψ₃-metric form of the equations:
//!
//! ```text
//! (1/ψ₃*) ∂τ[(1/ψ₃) ∂ζΩ_{a,b}] = (ν₀/2) Ω_{a,b}
//! ∂τ|ψ₃|² = −γ|ψ₃|² − (1/(2ν₀)) ∂ζ(|Ω_a|² + |Ω_b|²)
//! ```

use ndarray::Array2;
use num_complex::Complex64;

use super::state::{AtomGrid, FieldGrid};
use crate::error::Result;
use crate::medium::MediumParams;

/// Nodes with |ψ₃| below this are excluded from the Ω-equation residuals.
pub const PSI3_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResidual {
    pub max: f64,
    pub zeta_index: usize,
    pub tau_index: usize,
}

/// max |d(norm)/dτ + γ|ψ₃|²| using central differences in τ.
pub fn norm_decay_residual(atoms: &AtomGrid, gamma: f64, dtau: f64) -> NormResidual {
    let (nz, nt) = atoms.dim();
    let norm = |i: usize, j: usize| atoms.state(i, j).norm_sqr();
    let mut out = NormResidual {
        max: 0.0,
        zeta_index: 0,
        tau_index: 0,
    };
    for i in 0..nz {
        for j in 1..nt - 1 {
            let rate = (norm(i, j + 1) - norm(i, j - 1)) / (2.0 * dtau);
            let r = (rate + gamma * atoms.psi3[[i, j]].norm_sqr()).abs();
            if r > out.max {
                out = NormResidual {
                    max: r,
                    zeta_index: i,
                    tau_index: j,
                };
            }
        }
    }
    out
}

/// Scaled residuals of the three transformed equations on interior nodes.
///
/// The Ω equations are checked in the form multiplied through by ψ₃², which
/// stays regular where ψ₃ is small, and scaled by (ν₀/2)·max|Ω|·max|ψ₃|³.
/// The population residual is scaled by the largest sum of magnitudes of its
/// three terms.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedResiduals {
    pub probe: Array2<f64>,
    pub control: Array2<f64>,
    pub population: Array2<f64>,
    /// True where the Ω-equation residuals were evaluated.
    pub evaluated: Array2<bool>,
    /// Fraction of interior nodes excluded by the |ψ₃| floor.
    pub masked_fraction: f64,
    pub max_probe: f64,
    pub max_control: f64,
    pub max_population: f64,
}

pub fn transformed_residuals(
    fields: &FieldGrid,
    atoms: &AtomGrid,
    medium: &MediumParams,
    psi3_floor: f64,
) -> Result<TransformedResiduals> {
    fields.check_shape()?;
    if atoms.dim() != fields.omega_a.dim() {
        return Err(crate::error::Error::Shape(format!(
            "field grid {:?} but atom grid {:?}",
            fields.omega_a.dim(),
            atoms.dim()
        )));
    }
    let (nz, nt) = atoms.dim();
    let (dz, dt) = (fields.dzeta(), fields.dtau());
    let nu0 = medium.nu0();
    let gamma = medium.gamma();

    let mut probe = Array2::zeros((nz, nt));
    let mut control = Array2::zeros((nz, nt));
    let mut population = Array2::zeros((nz, nt));
    let mut evaluated = Array2::from_elem((nz, nt), false);

    let flux = |i: usize, j: usize| fields.omega_a[[i, j]].norm_sqr() + fields.omega_b[[i, j]].norm_sqr();

    let max_a = fields.omega_a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_b = fields.omega_b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_psi = atoms.psi3.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let psi_cubed = max_psi.powi(3);
    let scale = |m: f64| {
        let s = 0.5 * nu0 * m * psi_cubed;
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let (scale_a, scale_b) = (scale(max_a), scale(max_b));

    let mut pop_raw = Array2::<f64>::zeros((nz, nt));
    let mut pop_scale = 0.0f64;
    let mut masked = 0usize;
    let mut interior = 0usize;

    for i in 1..nz.saturating_sub(1) {
        for j in 1..nt.saturating_sub(1) {
            interior += 1;

            let p3 = |jj: usize| atoms.psi3[[i, jj]].norm_sqr();
            let dpop = (p3(j + 1) - p3(j - 1)) / (2.0 * dt);
            let loss = gamma * p3(j);
            let dflux = (flux(i + 1, j) - flux(i - 1, j)) / (2.0 * dz) / (2.0 * nu0);
            pop_raw[[i, j]] = (dpop + loss + dflux).abs();
            pop_scale = pop_scale.max(dpop.abs() + loss + dflux.abs());

            let psi = atoms.psi3[[i, j]];
            let near = [atoms.psi3[[i, j - 1]], psi, atoms.psi3[[i, j + 1]]];
            if near.iter().any(|z| z.norm() < psi3_floor) {
                masked += 1;
                continue;
            }
            evaluated[[i, j]] = true;
            // Multiplied through by ψ₃²:
            // ψ₃ ∂τζΩ − ∂ζΩ ∂τψ₃ = (ν₀/2)|ψ₃|²ψ₃ Ω.
            let dpsi = (atoms.psi3[[i, j + 1]] - atoms.psi3[[i, j - 1]]) / (2.0 * dt);
            for (field, out, scale) in [
                (&fields.omega_a, &mut probe, scale_a),
                (&fields.omega_b, &mut control, scale_b),
            ] {
                let dz_f = (field[[i + 1, j]] - field[[i - 1, j]]) / (2.0 * dz);
                let dzt_f = (field[[i + 1, j + 1]] - field[[i - 1, j + 1]] - field[[i + 1, j - 1]]
                    + field[[i - 1, j - 1]])
                    / (4.0 * dz * dt);
                let lhs = psi * dzt_f - dz_f * dpsi;
                let rhs: Complex64 = 0.5 * nu0 * psi.norm_sqr() * psi * field[[i, j]];
                out[[i, j]] = (lhs - rhs).norm() / scale;
            }
        }
    }
    let pop_scale = if pop_scale > 0.0 { pop_scale } else { 1.0 };
    population.assign(&(pop_raw / pop_scale));

    let max = |a: &Array2<f64>| a.iter().cloned().fold(0.0, f64::max);
    Ok(TransformedResiduals {
        max_probe: max(&probe),
        max_control: max(&control),
        max_population: max(&population),
        probe,
        control,
        population,
        evaluated,
        masked_fraction: if interior == 0 { 0.0 } else { masked as f64 / interior as f64 },
    })
}
