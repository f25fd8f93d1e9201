//! Scenario configuration, read from and written to JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use slowlight_core::analytic::fwhm;
use slowlight_core::calibration::ExperimentInputs;
use slowlight_core::coords::SPEED_OF_LIGHT;
use slowlight_core::MediumParams;

use crate::error::{ScenarioError, ScenarioResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub medium: MediumSpec,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    /// Soliton reference position ζ₀.
    pub zeta0: Extent,
    pub grid: GridConfig,
    #[serde(default)]
    pub initial_atoms: AtomsSpec,
    /// Run the Maxwell–Bloch integrator; otherwise only the closed form is
    /// evaluated.
    #[serde(default = "yes")]
    pub simulate: bool,
    /// Repeat the simulation with both steps doubled and report the error ratio.
    #[serde(default)]
    pub convergence_study: bool,
    pub timing: Timing,
    /// Lab-time interval [τ₀, τ₁] for the mean velocity; defaults to
    /// [0, τ_distance].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_velocity_interval_s: Option<[f64; 2]>,
    #[serde(default)]
    pub comparison: ComparisonSpec,
    #[serde(default)]
    pub emission: Emission,
    pub output_dir: PathBuf,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MediumSpec {
    Explicit {
        nu0: f64,
        gamma: f64,
        delta: f64,
        eps0: f64,
        p0: f64,
    },
    /// Calibrate ε₀ and p₀ from the measured pulse, then ν₀ from the
    /// distance anchor.
    Experiment {
        omega0: f64,
        t_p: f64,
        gamma: f64,
        distance_anchor: DistanceAnchor,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceAnchor {
    /// Lab distance travelled by the soliton center [m] ...
    pub distance_m: f64,
    /// ... by this retarded time [s].
    pub tau_s: f64,
}

impl MediumSpec {
    pub fn experiment_inputs(&self) -> Option<ExperimentInputs> {
        match *self {
            MediumSpec::Experiment { omega0, t_p, gamma, .. } => Some(ExperimentInputs {
                omega0,
                t_p,
                gamma,
                delta_t: None,
            }),
            MediumSpec::Explicit { .. } => None,
        }
    }
}

/// Control schedule p(τ). `Constant` holds p₀ fixed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    #[default]
    Constant,
    /// Monotone interpolation through (τ, p) nodes.
    Tabulated { taus_s: Vec<f64>, values: Vec<f64> },
    /// Smooth ramp from p₀ to `p_end` over [τ_start, τ_end].
    Ramp { p_end: f64, tau_start_s: f64, tau_end_s: f64 },
}

/// A ζ-axis length given in seconds, lab meters, or soliton widths w_s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Extent {
    Seconds(f64),
    Meters(f64),
    Widths(f64),
}

impl Extent {
    pub fn to_zeta(self, medium: &MediumParams) -> f64 {
        match self {
            Extent::Seconds(s) => s,
            Extent::Meters(m) => m / SPEED_OF_LIGHT,
            Extent::Widths(w) => w * fwhm(medium),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_zeta: usize,
    pub n_tau: usize,
    pub zeta_max: Extent,
    pub tau_max_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomsSpec {
    /// Every atom in |1⟩.
    #[default]
    Ground,
    /// Atoms already carrying the closed-form soliton at τ = 0.
    Dressed,
}

/// Reference times measured from the pulse entering the medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    /// Observed pulse delay Δτ [s].
    pub delay_s: f64,
    /// Amplitude comparison at Δτ + this [s].
    pub amplitude_offset_s: f64,
    /// Distance bookkeeping at Δτ + this [s].
    pub distance_offset_s: f64,
}

impl Timing {
    pub fn amplitude_tau(&self) -> f64 {
        self.delay_s + self.amplitude_offset_s
    }

    pub fn distance_tau(&self) -> f64 {
        self.delay_s + self.distance_offset_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSpec {
    /// Window half-width in units of w_s/2.
    #[serde(default = "one")]
    pub half_width_factor: f64,
    /// Only τ rows at or below this are compared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_limit_s: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl Default for ComparisonSpec {
    fn default() -> Self {
        ComparisonSpec {
            half_width_factor: 1.0,
            tau_limit_s: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Emission {
    /// τ values for field snapshots; each is moved to the nearest grid row.
    #[serde(default)]
    pub snapshot_taus_s: Vec<f64>,
    /// Also write every grid node of the simulated and closed-form fields.
    #[serde(default)]
    pub full_grid: bool,
}

impl ScenarioConfig {
    pub fn from_json(text: &str, origin: &Path) -> ScenarioResult<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| ScenarioError::Config {
            path: origin.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> ScenarioResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks that do not need the calibrated medium.
    pub fn validate(&self) -> ScenarioResult<()> {
        let bad = |key: &str, msg: String| Err(ScenarioError::Invalid { key: key.into(), message: msg });
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad("name", format!("must be a plain non-empty file name, got {:?}", self.name));
        }
        let g = &self.grid;
        if g.n_zeta < 8 || g.n_tau < 8 {
            return bad("grid", format!("need at least 8 nodes per axis, got {}x{}", g.n_zeta, g.n_tau));
        }
        if !(g.tau_max_s.is_finite() && g.tau_max_s > 0.0) {
            return bad("grid.tau_max_s", format!("must be positive, got {}", g.tau_max_s));
        }
        let t = &self.timing;
        for (key, v) in [
            ("timing.delay_s", t.delay_s),
            ("timing.amplitude_offset_s", t.amplitude_offset_s),
            ("timing.distance_offset_s", t.distance_offset_s),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(key, format!("must be non-negative, got {v}"));
            }
        }
        if let Some([a, b]) = self.mean_velocity_interval_s {
            if !(a >= 0.0 && b > a && b.is_finite()) {
                return bad("mean_velocity_interval_s", format!("need 0 <= start < end, got [{a}, {b}]"));
            }
        }
        if !(self.comparison.half_width_factor > 0.0) {
            return bad("comparison.half_width_factor", "must be positive".into());
        }
        if let Some(tau) = self.emission.snapshot_taus_s.iter().find(|t| !(**t >= 0.0 && **t <= g.tau_max_s)) {
            return bad("emission.snapshot_taus_s", format!("{tau} lies outside [0, grid.tau_max_s]"));
        }
        if let MediumSpec::Experiment { distance_anchor, .. } = &self.medium {
            if !(distance_anchor.distance_m > 0.0 && distance_anchor.tau_s > 0.0) {
                return bad("medium.experiment.distance_anchor", "distance and time must be positive".into());
            }
        }
        Ok(())
    }
}

/// Bundled scenarios.
pub mod presets {
    pub const SODIUM: &str = include_str!("../configs/sodium.json");
    pub const GAMMA0: &str = include_str!("../configs/gamma0.json");

    pub fn by_name(name: &str) -> Option<&'static str> {
        match name {
            "sodium" => Some(SODIUM),
            "gamma0" => Some(GAMMA0),
            _ => None,
        }
    }

    pub const NAMES: [&str; 2] = ["sodium", "gamma0"];
}
