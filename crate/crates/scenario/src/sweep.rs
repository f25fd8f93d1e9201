//! Several scenarios derived from one base config, run in parallel.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::emit::write_rows;
use crate::error::{ScenarioError, ScenarioResult};
use crate::run::{run_scenario, RunReport};

pub const SUMMARY_JSON: &str = "sweep_summary.json";
pub const SUMMARY_CSV: &str = "sweep_summary.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub variants: Vec<Variant>,
    /// Upper bound on simultaneous runs; defaults to the available cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_parallel: Option<usize>,
}

/// A JSON merge patch applied to the base config. Its output goes to
/// `<base output_dir>/<name>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    #[serde(default)]
    pub patch: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub name: String,
    pub output_dir: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<RunReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct SummaryRow<'a> {
    name: &'a str,
    ok: bool,
    decay_ratio: f64,
    distance_m: f64,
    mean_velocity_mps: f64,
    in_window_linf: f64,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub entries: Vec<SweepEntry>,
    /// Failures of the physics (no root, blow-up) among the variants.
    pub no_solution: usize,
    /// Other failures.
    pub failed: usize,
}

/// RFC 7396 merge patch.
pub fn merge_patch(target: &mut Value, patch: &Value) {
    match patch {
        Value::Object(p) => {
            if !target.is_object() {
                *target = Value::Object(Default::default());
            }
            let t = target.as_object_mut().expect("object");
            for (k, v) in p {
                if v.is_null() {
                    t.remove(k);
                } else {
                    merge_patch(t.entry(k.clone()).or_insert(Value::Null), v);
                }
            }
        }
        other => *target = other.clone(),
    }
}

impl SweepSpec {
    pub fn load(path: &Path) -> ScenarioResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| ScenarioError::Config {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// The concrete config of every variant.
    pub fn expand(&self) -> ScenarioResult<Vec<ScenarioConfig>> {
        let base = serde_json::to_value(&self.base).expect("config serializes");
        let mut names = std::collections::BTreeSet::new();
        self.variants
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let key = format!("variants[{i}]");
                if !names.insert(v.name.as_str()) {
                    return Err(ScenarioError::Invalid {
                        key,
                        message: format!("duplicate name {:?}", v.name),
                    });
                }
                let mut value = base.clone();
                merge_patch(&mut value, &v.patch);
                value["name"] = Value::String(v.name.clone());
                let mut cfg: ScenarioConfig = serde_json::from_value(value).map_err(|e| ScenarioError::Invalid {
                    key: format!("{key}.patch"),
                    message: e.to_string(),
                })?;
                cfg.output_dir = self.base.output_dir.join(&v.name);
                cfg.validate().map_err(|e| ScenarioError::Invalid {
                    key: format!("{key}.patch"),
                    message: e.to_string(),
                })?;
                Ok(cfg)
            })
            .collect()
    }
}

/// Runs every variant, at most `max_parallel` at a time, then writes the
/// summary in variant order.
pub fn run_sweep(spec: &SweepSpec) -> ScenarioResult<SweepOutcome> {
    let configs = spec.expand()?;
    let width = spec
        .max_parallel
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);

    let mut results: Vec<Option<ScenarioResult<RunReport>>> = (0..configs.len()).map(|_| None).collect();
    for (chunk_cfgs, chunk_out) in configs.chunks(width).zip(results.chunks_mut(width)) {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk_cfgs.iter().map(|c| scope.spawn(move || run_scenario(c))).collect();
            for (slot, h) in chunk_out.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("scenario thread panicked"));
            }
        });
    }

    let mut outcome = SweepOutcome {
        entries: Vec::with_capacity(configs.len()),
        no_solution: 0,
        failed: 0,
    };
    for (cfg, result) in configs.iter().zip(results) {
        let (report, error) = match result.expect("every variant ran") {
            Ok(r) => (Some(r), None),
            Err(e) => {
                if e.is_no_solution() {
                    outcome.no_solution += 1;
                } else {
                    outcome.failed += 1;
                }
                (None, Some(e.to_string()))
            }
        };
        outcome.entries.push(SweepEntry {
            name: cfg.name.clone(),
            output_dir: cfg.output_dir.clone(),
            error,
            report,
        });
    }
    write_summary(&spec.base.output_dir, &outcome.entries)?;
    Ok(outcome)
}

fn write_summary(dir: &Path, entries: &[SweepEntry]) -> ScenarioResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let rows: Vec<SummaryRow> = entries
        .iter()
        .map(|e| match &e.report {
            Some(r) => SummaryRow {
                name: &e.name,
                ok: true,
                decay_ratio: r.decay_ratio,
                distance_m: r.distance_m,
                mean_velocity_mps: r.mean_velocity_mps,
                in_window_linf: r.comparison.map_or(f64::NAN, |c| c.in_window_linf),
            },
            None => SummaryRow {
                name: &e.name,
                ok: false,
                decay_ratio: f64::NAN,
                distance_m: f64::NAN,
                mean_velocity_mps: f64::NAN,
                in_window_linf: f64::NAN,
            },
        })
        .collect();
    write_rows(&dir.join(SUMMARY_CSV), &rows)?;
    let path = dir.join(SUMMARY_JSON);
    let text = serde_json::to_string_pretty(entries).expect("summary serializes");
    std::fs::write(&path, text + "\n").map_err(|source| ScenarioError::Io { path, source })
}
