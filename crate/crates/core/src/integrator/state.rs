use ndarray::Array2;
use num_complex::Complex64;

use crate::analytic::AnalyticSoliton;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub psi3: Complex64,
}

impl AtomState {
    /// All population in |1⟩.
    pub fn ground() -> Self {
        AtomState {
            psi1: Complex64::new(1.0, 0.0),
            psi2: Complex64::new(0.0, 0.0),
            psi3: Complex64::new(0.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr() + self.psi3.norm_sqr()
    }

    pub(crate) fn to_array(self) -> [Complex64; 3] {
        [self.psi1, self.psi2, self.psi3]
    }
}

/// Atomic amplitudes carried by the closed-form soliton, in the gauge where
/// Ω_a and Ω_b are real:
///
/// ψ₁ = −e^α tanh φ,  ψ₂ = −p e^α sech φ/√(p²+1),  ψ₃ = i e^α sech φ/√(p²+1).
///
/// For γ = 0 this is the exact Maxwell–Bloch state; only Δ = 0 is supported.
pub fn soliton_atom_state(soliton: &AnalyticSoliton, tau: f64, zeta: f64) -> Result<AtomState> {
    let cfg = soliton.config();
    if cfg.medium.delta() != 0.0 {
        return Err(Error::invalid("delta", "soliton atomic state is only available on resonance"));
    }
    let phi = soliton.phase(tau, zeta)?;
    let (p, _) = cfg.schedule.eval(tau)?;
    let ea = soliton.alpha().alpha(tau)?.exp();
    let sech = 1.0 / phi.cosh();
    let q = (p * p + 1.0).sqrt();
    Ok(AtomState {
        psi1: Complex64::new(-ea * phi.tanh(), 0.0),
        psi2: Complex64::new(-p * ea * sech / q, 0.0),
        psi3: Complex64::new(0.0, ea * sech / q),
    })
}

/// Complex Rabi fields on the (ζ, τ) lattice; arrays are indexed `[ζ, τ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub zetas: Vec<f64>,
    pub taus: Vec<f64>,
    pub omega_a: Array2<Complex64>,
    pub omega_b: Array2<Complex64>,
}

impl FieldGrid {
    pub fn dzeta(&self) -> f64 {
        self.zetas[1] - self.zetas[0]
    }

    pub fn dtau(&self) -> f64 {
        self.taus[1] - self.taus[0]
    }

    pub(crate) fn check_shape(&self) -> Result<()> {
        let dim = (self.zetas.len(), self.taus.len());
        if self.omega_a.dim() != dim || self.omega_b.dim() != dim {
            return Err(Error::Shape(format!(
                "axes {:?} but field arrays {:?} / {:?}",
                dim,
                self.omega_a.dim(),
                self.omega_b.dim()
            )));
        }
        Ok(())
    }
}

/// Atomic amplitudes on the same lattice as the [`FieldGrid`] they came with.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomGrid {
    pub psi1: Array2<Complex64>,
    pub psi2: Array2<Complex64>,
    pub psi3: Array2<Complex64>,
}

impl AtomGrid {
    pub fn dim(&self) -> (usize, usize) {
        self.psi1.dim()
    }

    pub fn state(&self, zeta_index: usize, tau_index: usize) -> AtomState {
        AtomState {
            psi1: self.psi1[[zeta_index, tau_index]],
            psi2: self.psi2[[zeta_index, tau_index]],
            psi3: self.psi3[[zeta_index, tau_index]],
        }
    }
}
