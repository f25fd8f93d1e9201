//! Direct integration of the Maxwell–Bloch system in retarded coordinates:
//!
//! ```text
//! ∂ζΩ_a = iν₀ψ₃ψ₁*,   ∂ζΩ_b = iν₀ψ₃ψ₂*
//! ∂τψ₁ = (i/2)Ω_a*ψ₃,   ∂τψ₂ = (i/2)Ω_b*ψ₃
//! ∂τψ₃ = −(iΔ + γ/2)ψ₃ + (i/2)(Ω_aψ₁ + Ω_bψ₂)
//! ```
//!
//! Fields are prescribed on ζ = 0 for all τ and atoms on τ = 0 for all ζ.

mod compare;
mod diagnostics;
mod plan;
mod simulate;
mod state;

pub use compare::{compare_to_analytic, ErrorReport, WindowPolicy};
pub use diagnostics::{norm_decay_residual, transformed_residuals, NormResidual, TransformedResiduals, PSI3_FLOOR};
pub use plan::{Boundary, GridSpec, InitialAtoms, SchemeControls, SimulationPlan};
pub use simulate::simulate;
pub use state::{soliton_atom_state, AtomGrid, AtomState, FieldGrid};
