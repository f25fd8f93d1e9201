use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("tau = {tau:e} s lies outside the domain [{lo:e}, {hi:e}] s")]
    Domain { tau: f64, lo: f64, hi: f64 },

    #[error("Liouville solution is singular: A+ A- = {product} >= 1")]
    Singularity { product: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("no real root: discriminant {discriminant:e} < 0")]
    NoRealRoot { discriminant: f64 },

    #[error("simulation diverged at zeta index {zeta_index}, tau index {tau_index}: |field| = {magnitude:e} exceeds {limit:e}")]
    Diverged {
        zeta_index: usize,
        tau_index: usize,
        magnitude: f64,
        limit: f64,
    },

    #[error("non-finite value at zeta index {zeta_index}, tau index {tau_index}")]
    Numeric { zeta_index: usize, tau_index: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
