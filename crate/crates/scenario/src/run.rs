//! The scenario pipeline: calibrate, evaluate the closed form, integrate the
//! Maxwell–Bloch equations, compare, and write everything to disk.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use slowlight_core::analytic::{fwhm, validity_report, AnalyticSoliton};
use slowlight_core::calibration::{calibrate, decay_ratio, effective_gamma, CalibrationResult};
use slowlight_core::coords::SPEED_OF_LIGHT;
use slowlight_core::integrator::{
    compare_to_analytic, norm_decay_residual, simulate, AtomGrid, Boundary, ErrorReport,
    FieldGrid, GridSpec, InitialAtoms, SimulationPlan, WindowPolicy,
};
use slowlight_core::{make_medium_params, ControlSchedule, MediumParams, SolitonConfig};

use crate::anchor::{calibrate_nu0, Nu0Calibration};
use crate::config::{AtomsSpec, MediumSpec, ScenarioConfig, ScheduleSpec};
use crate::emit::{write_rows, SnapshotRow, TrajectoryRow};
use crate::error::{ScenarioError, ScenarioResult};

pub const REPORT_FILE: &str = "report.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const PDE_GRID_FILE: &str = "pde_grid.csv";
pub const ANALYTIC_GRID_FILE: &str = "analytic_grid.csv";

/// Medium, schedule and soliton after calibration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub medium: MediumParams,
    pub p0: f64,
    pub calibration: Option<CalibrationResult>,
    pub anchor: Option<Nu0Calibration>,
    pub soliton: AnalyticSoliton,
    /// Same pulse without relaxation.
    pub reference: AnalyticSoliton,
    pub zeta_max: f64,
}

fn schedule_for(spec: &ScheduleSpec, p0: f64) -> slowlight_core::Result<ControlSchedule> {
    match spec {
        ScheduleSpec::Constant => ControlSchedule::constant(p0),
        ScheduleSpec::Tabulated { taus_s, values } => ControlSchedule::tabulated(taus_s.clone(), values.clone()),
        ScheduleSpec::Ramp {
            p_end,
            tau_start_s,
            tau_end_s,
        } => ControlSchedule::smooth_ramp(p0, *p_end, *tau_start_s, *tau_end_s),
    }
}

/// Latest τ any part of the report needs.
fn analytic_horizon(cfg: &ScenarioConfig) -> f64 {
    let mut end = cfg
        .grid
        .tau_max_s
        .max(cfg.timing.amplitude_tau())
        .max(cfg.timing.distance_tau());
    if let Some([_, b]) = cfg.mean_velocity_interval_s {
        end = end.max(b);
    }
    end
}

pub fn resolve(cfg: &ScenarioConfig) -> ScenarioResult<Resolved> {
    cfg.validate()?;
    let (medium, p0, schedule, calibration, anchor) = match &cfg.medium {
        MediumSpec::Explicit {
            nu0,
            gamma,
            delta,
            eps0,
            p0,
        } => {
            let m = make_medium_params(*nu0, *gamma, *delta, *eps0).map_err(ScenarioError::model("medium.explicit"))?;
            let s = schedule_for(&cfg.schedule, *p0).map_err(ScenarioError::model("schedule"))?;
            (m, *p0, s, None, None)
        }
        MediumSpec::Experiment {
            gamma, distance_anchor, ..
        } => {
            let inputs = cfg.medium.experiment_inputs().expect("experiment medium");
            let cal = calibrate(&inputs).map_err(ScenarioError::model("medium.experiment"))?;
            let s = schedule_for(&cfg.schedule, cal.p0).map_err(ScenarioError::model("schedule"))?;
            let n = calibrate_nu0(&cal, *gamma, 0.0, &s, *distance_anchor)
                .map_err(ScenarioError::model("medium.experiment.distance_anchor"))?;
            let m = make_medium_params(n.nu0, *gamma, 0.0, cal.eps0).map_err(ScenarioError::model("medium.experiment"))?;
            (m, cal.p0, s, Some(cal), Some(n))
        }
    };
    let soliton_cfg = SolitonConfig::new(cfg.zeta0.to_zeta(&medium), medium, schedule);
    let soliton = AnalyticSoliton::new(soliton_cfg, analytic_horizon(cfg)).map_err(ScenarioError::model("schedule"))?;
    let reference = soliton.reference().map_err(ScenarioError::model("schedule"))?;
    let zeta_max = cfg.grid.zeta_max.to_zeta(&medium);
    if !(zeta_max.is_finite() && zeta_max > 0.0) {
        return Err(ScenarioError::Invalid {
            key: "grid.zeta_max".into(),
            message: format!("must resolve to a positive length, got {zeta_max:e} s"),
        });
    }
    Ok(Resolved {
        medium,
        p0,
        calibration,
        anchor,
        soliton,
        reference,
        zeta_max,
    })
}

pub fn simulation_plan(cfg: &ScenarioConfig, r: &Resolved, n_zeta: usize, n_tau: usize) -> ScenarioResult<SimulationPlan> {
    let grid = GridSpec {
        n_zeta,
        n_tau,
        zeta_max: r.zeta_max,
        tau_max: cfg.grid.tau_max_s,
    };
    let atoms = match cfg.initial_atoms {
        AtomsSpec::Ground => InitialAtoms::Ground,
        AtomsSpec::Dressed => InitialAtoms::Dressed(Box::new(r.soliton.clone())),
    };
    SimulationPlan::new(r.medium, grid, Boundary::Soliton(r.soliton.clone()), atoms)
        .map_err(ScenarioError::model("grid"))
}

fn window_policy(cfg: &ScenarioConfig) -> WindowPolicy {
    WindowPolicy {
        half_width_factor: cfg.comparison.half_width_factor,
        tau_limit: cfg.comparison.tau_limit_s,
    }
}

/// Runs the integrator on the configured grid and compares with the
/// closed form.
pub fn simulate_and_compare(cfg: &ScenarioConfig, r: &Resolved) -> ScenarioResult<(FieldGrid, AtomGrid, ErrorReport)> {
    let plan = simulation_plan(cfg, r, cfg.grid.n_zeta, cfg.grid.n_tau)?;
    let (fields, atoms) = simulate(&plan).map_err(ScenarioError::model("grid"))?;
    let report = compare_to_analytic(&fields, &r.soliton, window_policy(cfg)).map_err(ScenarioError::model("comparison"))?;
    Ok((fields, atoms, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumSummary {
    pub nu0: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eps0: f64,
    pub k: f64,
    pub p0: f64,
    pub zeta0_s: f64,
    pub zeta_max_s: f64,
    /// Soliton FWHM w_s in ζ.
    pub w_s_s: f64,
    /// eps0 < 0.7 gamma.
    pub validity_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    /// Grid τ actually used.
    pub tau_s: f64,
    pub requested_tau_s: f64,
    pub analytic_file: String,
    pub reference_file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pde_file: Option<String>,
    pub analytic_peak: f64,
    pub reference_peak: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pde_peak: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub fine_grid: [usize; 2],
    pub coarse_grid: [usize; 2],
    pub fine_in_window_linf: f64,
    pub coarse_in_window_linf: f64,
    /// coarse / fine.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub medium: MediumSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Nu0Calibration>,
    pub gamma_star: f64,
    pub tau_amplitude_s: f64,
    pub tau_distance_s: f64,
    /// Peak ratio against the lossless reference at τ_amplitude (trajectory row).
    pub decay_ratio: f64,
    /// e^{−γ* τ_amplitude}.
    pub decay_ratio_closed_form: f64,
    /// Lab distance of the center between τ = 0 and τ_distance [m].
    pub distance_m: f64,
    /// c/(4kγ); absent without relaxation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_distance_m: Option<f64>,
    pub mean_velocity_interval_s: [f64; 2],
    /// Center displacement over elapsed lab time in the interval [m/s].
    pub mean_velocity_mps: f64,
    pub trajectory_file: String,
    pub snapshots: Vec<SnapshotSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
    /// Largest |d(norm)/dτ + γ|ψ₃|²| over the simulated grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_residual: Option<f64>,
}

fn trajectory_taus(cfg: &ScenarioConfig, interval: [f64; 2]) -> Vec<f64> {
    let n = cfg.grid.n_tau;
    let tau_max = cfg.grid.tau_max_s;
    let mut taus: Vec<f64> = grid_axis(n, tau_max);
    taus.extend([
        cfg.timing.amplitude_tau(),
        cfg.timing.distance_tau(),
        interval[0],
        interval[1],
    ]);
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    taus
}

/// The integrator's node positions.
fn grid_axis(n: usize, max: f64) -> Vec<f64> {
    let h = max / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { max } else { i as f64 * h }).collect()
}

fn trajectory_rows(r: &Resolved, taus: &[f64]) -> ScenarioResult<Vec<TrajectoryRow>> {
    let s = &r.soliton;
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let zeta_c = s.center(tau).map_err(ScenarioError::model("timing"))?;
        let (_, v_lab) = s.velocity(tau).map_err(ScenarioError::model("timing"))?;
        let peak = s.peak_amplitude(tau).map_err(ScenarioError::model("timing"))?;
        let reference = r.reference.peak_amplitude(tau).map_err(ScenarioError::model("timing"))?;
        let margin = validity_report(s.config(), s.alpha(), tau)
            .map_err(ScenarioError::model("timing"))?
            .margin;
        rows.push(TrajectoryRow {
            tau_s: tau,
            zeta_c_s: zeta_c,
            z_c_m: zeta_c * SPEED_OF_LIGHT,
            v_lab_mps: v_lab,
            peak_omega_a: peak,
            decay_ratio: peak / reference,
            validity_margin: margin,
        });
    }
    Ok(rows)
}

fn row_at(rows: &[TrajectoryRow], tau: f64) -> &TrajectoryRow {
    rows.iter().find(|r| r.tau_s == tau).expect("trajectory contains every reference time")
}

/// Displacement over elapsed lab time t = τ + z/c between two trajectory rows.
pub fn mean_velocity(a: &TrajectoryRow, b: &TrajectoryRow) -> f64 {
    let dz = b.z_c_m - a.z_c_m;
    let dt = (b.tau_s + b.z_c_m / SPEED_OF_LIGHT) - (a.tau_s + a.z_c_m / SPEED_OF_LIGHT);
    dz / dt
}

fn analytic_snapshot(s: &AnalyticSoliton, tau: f64, zetas: &[f64]) -> ScenarioResult<Vec<SnapshotRow>> {
    zetas
        .iter()
        .map(|&zeta| {
            let f = s.fields(tau, zeta).map_err(ScenarioError::model("emission.snapshot_taus_s"))?;
            Ok(SnapshotRow::new(
                tau,
                zeta,
                zeta * SPEED_OF_LIGHT,
                Complex64::new(f.omega_a, 0.0),
                Complex64::new(f.omega_b, 0.0),
                f.psi3_abs,
            ))
        })
        .collect()
}

fn pde_snapshot(fields: &FieldGrid, atoms: &AtomGrid, j: usize) -> Vec<SnapshotRow> {
    let tau = fields.taus[j];
    fields
        .zetas
        .iter()
        .enumerate()
        .map(|(i, &zeta)| {
            SnapshotRow::new(
                tau,
                zeta,
                zeta * SPEED_OF_LIGHT,
                fields.omega_a[[i, j]],
                fields.omega_b[[i, j]],
                atoms.psi3[[i, j]].norm(),
            )
        })
        .collect()
}

fn peak(rows: &[SnapshotRow]) -> f64 {
    rows.iter().map(|r| r.abs_omega_a).fold(0.0, f64::max)
}

fn ensure_dir(dir: &Path) -> ScenarioResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Runs the whole pipeline and writes its artifacts to `cfg.output_dir`.
pub fn run_scenario(cfg: &ScenarioConfig) -> ScenarioResult<RunReport> {
    let r = resolve(cfg)?;
    let out: PathBuf = cfg.output_dir.clone();
    ensure_dir(&out)?;

    let interval = cfg.mean_velocity_interval_s.unwrap_or([0.0, cfg.timing.distance_tau()]);
    let taus = trajectory_taus(cfg, interval);
    let traj = trajectory_rows(&r, &taus)?;
    write_rows(&out.join(TRAJECTORY_FILE), &traj)?;

    let tau_amp = cfg.timing.amplitude_tau();
    let tau_dist = cfg.timing.distance_tau();
    let start = row_at(&traj, 0.0);
    let distance_m = row_at(&traj, tau_dist).z_c_m - start.z_c_m;
    let mean_velocity_mps = mean_velocity(row_at(&traj, interval[0]), row_at(&traj, interval[1]));
    let gamma_star = effective_gamma(r.medium.gamma(), r.p0);

    let sim = if cfg.simulate {
        Some(simulate_and_compare(cfg, &r)?)
    } else {
        None
    };
    let zetas = match &sim {
        Some((f, _, _)) => f.zetas.clone(),
        None => grid_axis(cfg.grid.n_zeta, r.zeta_max),
    };
    let grid_taus = grid_axis(cfg.grid.n_tau, cfg.grid.tau_max_s);
    let dtau = grid_taus[1] - grid_taus[0];

    let mut snapshots = Vec::new();
    for (idx, &requested) in cfg.emission.snapshot_taus_s.iter().enumerate() {
        let j = ((requested / dtau).round() as usize).min(grid_taus.len() - 1);
        let tau = grid_taus[j];
        let analytic = analytic_snapshot(&r.soliton, tau, &zetas)?;
        let reference = analytic_snapshot(&r.reference, tau, &zetas)?;
        let analytic_file = format!("snapshot_analytic_{idx:02}.csv");
        let reference_file = format!("snapshot_reference_{idx:02}.csv");
        write_rows(&out.join(&analytic_file), &analytic)?;
        write_rows(&out.join(&reference_file), &reference)?;
        let (pde_file, pde_peak) = match &sim {
            Some((f, a, _)) => {
                let rows = pde_snapshot(f, a, j);
                let name = format!("snapshot_pde_{idx:02}.csv");
                write_rows(&out.join(&name), &rows)?;
                (Some(name), Some(peak(&rows)))
            }
            None => (None, None),
        };
        snapshots.push(SnapshotSummary {
            tau_s: tau,
            requested_tau_s: requested,
            analytic_file,
            reference_file,
            pde_file,
            analytic_peak: peak(&analytic),
            reference_peak: peak(&reference),
            pde_peak,
        });
    }

    if cfg.emission.full_grid {
        let mut analytic = Vec::with_capacity(grid_taus.len() * zetas.len());
        for &tau in &grid_taus {
            analytic.extend(analytic_snapshot(&r.soliton, tau, &zetas)?);
        }
        write_rows(&out.join(ANALYTIC_GRID_FILE), &analytic)?;
        if let Some((f, a, _)) = &sim {
            let rows: Vec<SnapshotRow> = (0..f.taus.len()).flat_map(|j| pde_snapshot(f, a, j)).collect();
            write_rows(&out.join(PDE_GRID_FILE), &rows)?;
        }
    }

    let convergence = match (&sim, cfg.convergence_study) {
        (Some((_, _, fine)), true) => Some(convergence_study(cfg, &r, fine)?),
        _ => None,
    };

    let w_s = fwhm(&r.medium);
    let report = RunReport {
        name: cfg.name.clone(),
        medium: MediumSummary {
            nu0: r.medium.nu0(),
            gamma: r.medium.gamma(),
            delta: r.medium.delta(),
            eps0: r.medium.eps0(),
            k: r.medium.k(),
            p0: r.p0,
            zeta0_s: r.soliton.config().zeta0,
            zeta_max_s: r.zeta_max,
            w_s_s: w_s,
            validity_warning: r.medium.validity_warning(),
        },
        calibration: r.calibration.clone(),
        anchor: r.anchor,
        gamma_star,
        tau_amplitude_s: tau_amp,
        tau_distance_s: tau_dist,
        decay_ratio: row_at(&traj, tau_amp).decay_ratio,
        decay_ratio_closed_form: decay_ratio(gamma_star, tau_amp),
        distance_m,
        max_distance_m: (r.medium.gamma() > 0.0)
            .then(|| SPEED_OF_LIGHT / (4.0 * r.medium.k() * r.medium.gamma())),
        mean_velocity_interval_s: interval,
        mean_velocity_mps,
        trajectory_file: TRAJECTORY_FILE.into(),
        snapshots,
        comparison: sim.as_ref().map(|s| s.2),
        convergence,
        norm_residual: sim
            .as_ref()
            .map(|(f, a, _)| norm_decay_residual(a, r.medium.gamma(), f.dtau()).max),
    };
    write_report(&out.join(REPORT_FILE), &report)?;
    Ok(report)
}

/// Reruns on the grid with both steps doubled.
fn convergence_study(cfg: &ScenarioConfig, r: &Resolved, fine: &ErrorReport) -> ScenarioResult<Convergence> {
    let coarse = [(cfg.grid.n_zeta - 1) / 2 + 1, (cfg.grid.n_tau - 1) / 2 + 1];
    let plan = simulation_plan(cfg, r, coarse[0], coarse[1])?;
    let (fields, _) = simulate(&plan).map_err(ScenarioError::model("convergence_study"))?;
    let e = compare_to_analytic(&fields, &r.soliton, window_policy(cfg)).map_err(ScenarioError::model("comparison"))?;
    Ok(Convergence {
        fine_grid: [cfg.grid.n_zeta, cfg.grid.n_tau],
        coarse_grid: coarse,
        fine_in_window_linf: fine.in_window_linf,
        coarse_in_window_linf: e.in_window_linf,
        ratio: e.in_window_linf / fine.in_window_linf,
    })
}

fn write_report(path: &Path, report: &RunReport) -> ScenarioResult<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(path, text + "\n").map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}
