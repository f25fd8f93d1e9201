//! Laboratory ↔ retarded coordinates.

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// ζ = z/c and τ = t − z/c, both in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetardedCoords {
    pub zeta: f64,
    pub tau: f64,
}

pub fn to_retarded(z: f64, t: f64, c: f64) -> RetardedCoords {
    debug_assert!(c > 0.0);
    let zeta = z / c;
    RetardedCoords {
        zeta,
        tau: t - zeta,
    }
}

/// Returns `(z, t)`.
pub fn from_retarded(coords: RetardedCoords, c: f64) -> (f64, f64) {
    debug_assert!(c > 0.0);
    (coords.zeta * c, coords.tau + coords.zeta)
}
