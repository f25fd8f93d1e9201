use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::state::{soliton_atom_state, AtomState};
use crate::analytic::AnalyticSoliton;
use crate::error::{Error, Result};
use crate::medium::MediumParams;

pub type FieldFn = Arc<dyn Fn(f64) -> (Complex64, Complex64) + Send + Sync>;
pub type AtomFn = Arc<dyn Fn(f64) -> AtomState + Send + Sync>;

/// (Ω_a, Ω_b) at the medium entrance ζ = 0 as functions of τ.
#[derive(Clone)]
pub enum Boundary {
    Constant { omega_a: Complex64, omega_b: Complex64 },
    /// The closed-form soliton evaluated at ζ = 0.
    Soliton(AnalyticSoliton),
    Custom(FieldFn),
}

impl Boundary {
    /// Probe off, control at Ω₀.
    pub fn control_only(omega0: f64) -> Self {
        Boundary::Constant {
            omega_a: Complex64::new(0.0, 0.0),
            omega_b: Complex64::new(omega0, 0.0),
        }
    }

    pub fn eval(&self, tau: f64) -> Result<(Complex64, Complex64)> {
        match self {
            Boundary::Constant { omega_a, omega_b } => Ok((*omega_a, *omega_b)),
            Boundary::Soliton(s) => {
                let f = s.fields(tau, 0.0)?;
                Ok((Complex64::new(f.omega_a, 0.0), Complex64::new(f.omega_b, 0.0)))
            }
            Boundary::Custom(f) => Ok(f(tau)),
        }
    }
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Constant { omega_a, omega_b } => f
                .debug_struct("Constant")
                .field("omega_a", omega_a)
                .field("omega_b", omega_b)
                .finish(),
            Boundary::Soliton(s) => f.debug_tuple("Soliton").field(s.config()).finish(),
            Boundary::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Atomic state on τ = 0 as a function of ζ.
#[derive(Clone)]
pub enum InitialAtoms {
    Ground,
    /// The soliton's own atomic state at τ = 0 (exact for γ = 0).
    Dressed(Box<AnalyticSoliton>),
    Custom(AtomFn),
}

impl InitialAtoms {
    pub fn eval(&self, zeta: f64) -> Result<AtomState> {
        match self {
            InitialAtoms::Ground => Ok(AtomState::ground()),
            InitialAtoms::Dressed(s) => soliton_atom_state(s, 0.0, zeta),
            InitialAtoms::Custom(f) => Ok(f(zeta)),
        }
    }
}

impl fmt::Debug for InitialAtoms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialAtoms::Ground => f.write_str("Ground"),
            InitialAtoms::Dressed(s) => f.debug_tuple("Dressed").field(s.config()).finish(),
            InitialAtoms::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of ζ nodes, including ζ = 0 and ζ = zeta_max.
    pub n_zeta: usize,
    /// Number of τ nodes, including τ = 0 and τ = tau_max.
    pub n_tau: usize,
    pub zeta_max: f64,
    pub tau_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeControls {
    /// A ζ step whose largest field change exceeds this fraction of the
    /// boundary maximum is bisected.
    pub max_step_change: f64,
    /// Fields larger than this multiple of the boundary maximum abort the run.
    pub divergence_factor: f64,
    pub max_bisections: u32,
}

impl Default for SchemeControls {
    fn default() -> Self {
        SchemeControls {
            max_step_change: 0.05,
            divergence_factor: 10.0,
            max_bisections: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub medium: MediumParams,
    pub grid: GridSpec,
    pub boundary: Boundary,
    pub initial_atoms: InitialAtoms,
    pub controls: SchemeControls,
}

impl SimulationPlan {
    pub fn new(medium: MediumParams, grid: GridSpec, boundary: Boundary, initial_atoms: InitialAtoms) -> Result<Self> {
        if grid.n_zeta < 8 || grid.n_tau < 8 {
            return Err(Error::invalid(
                "grid",
                format!("need at least 8 nodes per axis, got {} x {}", grid.n_zeta, grid.n_tau),
            ));
        }
        if !(grid.zeta_max.is_finite() && grid.zeta_max > 0.0) {
            return Err(Error::invalid("zeta_max", format!("must be positive, got {}", grid.zeta_max)));
        }
        if !(grid.tau_max.is_finite() && grid.tau_max > 0.0) {
            return Err(Error::invalid("tau_max", format!("must be positive, got {}", grid.tau_max)));
        }
        if let InitialAtoms::Dressed(s) = &initial_atoms {
            if s.config().medium.delta() != 0.0 {
                return Err(Error::invalid("initial_atoms", "dressed initial state requires delta = 0"));
            }
        }
        Ok(SimulationPlan {
            medium,
            grid,
            boundary,
            initial_atoms,
            controls: SchemeControls::default(),
        })
    }

    pub fn with_controls(mut self, controls: SchemeControls) -> Self {
        self.controls = controls;
        self
    }

    pub fn taus(&self) -> Vec<f64> {
        axis(self.grid.n_tau, self.grid.tau_max)
    }

    pub fn zetas(&self) -> Vec<f64> {
        axis(self.grid.n_zeta, self.grid.zeta_max)
    }
}

fn axis(n: usize, max: f64) -> Vec<f64> {
    let h = max / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { max } else { i as f64 * h }).collect()
}
