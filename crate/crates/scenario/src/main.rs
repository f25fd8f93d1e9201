use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use slowlight_core::calibration::{calibrate, ExperimentInputs};
use slowlight_scenario::run::{resolve, simulate_and_compare};
use slowlight_scenario::{presets, run_scenario, run_sweep, ScenarioConfig, ScenarioError, SweepSpec};

/// Slow-light soliton calibration, simulation and comparison. All flags in SI units.
#[derive(Debug, Parser)]
#[command(name = "slowlight", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recover p0 and eps0 from the control field and pulse duration.
    Calibrate {
        /// Background control Rabi frequency [rad/s].
        #[arg(long)]
        omega0: f64,
        /// Pulse duration (FWHM of the amplitude) [s].
        #[arg(long)]
        tp: f64,
        /// Excited-state decay rate [1/s].
        #[arg(long)]
        gamma: f64,
        /// Observed pulse delay [s]; echoed only.
        #[arg(long)]
        delta_t: Option<f64>,
    },
    /// Run a scenario and write its report and CSV files.
    Run(ScenarioArgs),
    /// Run every variant of a sweep file in parallel.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Replaces the base output directory.
        #[arg(long, env = "SLOWLIGHT_OUTPUT_DIR")]
        output_dir: Option<PathBuf>,
    },
    /// Simulate a scenario and print the error against the closed form.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Only compare rows with τ at or below this [s].
        #[arg(long)]
        tau_limit: Option<f64>,
        /// Window half-width in units of w_s/2.
        #[arg(long)]
        half_width_factor: Option<f64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
struct ScenarioSource {
    /// Scenario JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled scenario: sodium or gamma0.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Replaces the configured output directory.
    #[arg(long, env = "SLOWLIGHT_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

impl ScenarioArgs {
    fn load(&self) -> anyhow::Result<ScenarioConfig> {
        let mut cfg = match (&self.source.config, &self.source.preset) {
            (Some(path), _) => ScenarioConfig::load(path)?,
            (None, Some(name)) => {
                let Some(text) = presets::by_name(name) else {
                    bail!(UsageError(format!(
                        "unknown preset {name:?}; available: {}",
                        presets::NAMES.join(", ")
                    )));
                };
                ScenarioConfig::from_json(text, Path::new(&format!("<preset {name}>")))?
            }
            (None, None) => unreachable!("clap enforces one source"),
        };
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
        Ok(cfg)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

#[derive(Serialize)]
struct CalibrateOutput {
    p0: f64,
    eps0: f64,
    gamma_star: f64,
    tau_rel_star: f64,
    validity_ok: bool,
    residuals: Residuals,
    roots: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_t: Option<f64>,
}

#[derive(Serialize)]
struct Residuals {
    bg_field: f64,
    time_width: f64,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Calibrate {
            omega0,
            tp,
            gamma,
            delta_t,
        } => {
            let r = calibrate(&ExperimentInputs {
                omega0,
                t_p: tp,
                gamma,
                delta_t,
            })?;
            print_json(&CalibrateOutput {
                p0: r.p0,
                eps0: r.eps0,
                gamma_star: r.gamma_star,
                tau_rel_star: r.tau_rel_star,
                validity_ok: r.validity_ok,
                residuals: Residuals {
                    bg_field: r.bg_field_residual,
                    time_width: r.time_width_residual,
                },
                roots: r.roots,
                delta_t,
            });
        }
        Command::Run(args) => {
            let cfg = args.load()?;
            if resolve(&cfg)?.medium.validity_warning() {
                eprintln!("warning: eps0 < 0.7 gamma; the closed form is unreliable even across the pulse width");
            }
            let report = run_scenario(&cfg)?;
            print_json(&report);
            eprintln!("wrote {}", cfg.output_dir.display());
        }
        Command::Sweep { spec, output_dir } => {
            let mut spec = SweepSpec::load(&spec)?;
            if let Some(dir) = output_dir {
                spec.base.output_dir = dir;
            }
            let outcome = run_sweep(&spec)?;
            for e in &outcome.entries {
                match &e.error {
                    None => eprintln!("{}: ok ({})", e.name, e.output_dir.display()),
                    Some(err) => eprintln!("{}: failed: {err}", e.name),
                }
            }
            if outcome.failed > 0 {
                bail!("{} variant(s) failed", outcome.failed);
            }
            if outcome.no_solution > 0 {
                bail!(NoSolution(format!("{} variant(s) found no solution", outcome.no_solution)));
            }
        }
        Command::Compare {
            scenario,
            tau_limit,
            half_width_factor,
        } => {
            let mut cfg = scenario.load()?;
            if tau_limit.is_some() {
                cfg.comparison.tau_limit_s = tau_limit;
            }
            if let Some(f) = half_width_factor {
                cfg.comparison.half_width_factor = f;
            }
            cfg.validate()?;
            let resolved = resolve(&cfg)?;
            let (_, _, report) = simulate_and_compare(&cfg, &resolved)?;
            std::fs::create_dir_all(&cfg.output_dir)
                .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
            let path = cfg.output_dir.join("comparison.json");
            let text = serde_json::to_string_pretty(&report)?;
            std::fs::write(&path, text.clone() + "\n").with_context(|| format!("writing {}", path.display()))?;
            println!("{text}");
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct NoSolution(String);

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<NoSolution>().is_some() {
        return 2;
    }
    if let Some(e) = err.downcast_ref::<ScenarioError>() {
        return if e.is_no_solution() { 2 } else { 1 };
    }
    if let Some(e) = err.downcast_ref::<slowlight_core::Error>() {
        use slowlight_core::Error as E;
        return match e {
            E::NoSolution(_) | E::NoRealRoot { .. } | E::Diverged { .. } | E::Numeric { .. } => 2,
            _ => 1,
        };
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
