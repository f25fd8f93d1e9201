//! Closed-form relaxing slow-light soliton.

pub mod alpha;
pub mod liouville;
pub mod phase;
pub mod soliton;
pub mod validity;

pub use alpha::{integrate_alpha, integrate_alpha_auto, AlphaTrajectory};
pub use liouville::{liouville_rho, liouville_rho_plain, LiouvilleData};
pub use phase::{phase3_quadrature, PhaseSources};
pub use soliton::{
    group_velocity, peak_amplitude, soliton_center, soliton_fields, soliton_phase, AnalyticSoliton,
    SolitonFieldSample,
};
pub use validity::{
    approximation_ratio, fwhm, max_distance, neglected_term_ratio, validity_report, ValidityReport,
};
