use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slowlight(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_slowlight"));
    cmd.args(args).env_remove("SLOWLIGHT_OUTPUT_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn calibrate_reproduces_the_sodium_numbers() {
    let out = slowlight(&["calibrate", "--omega0", "3.528e7", "--tp", "2.5e-6", "--gamma", "6.3e7"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["p0"].as_f64().unwrap() - 18.4).abs() < 0.2);
    assert!((v["eps0"].as_f64().unwrap() / 3.59e8 - 1.0).abs() < 0.01);
    for key in ["gamma_star", "tau_rel_star", "validity_ok"] {
        assert!(!v[key].is_null(), "{key}");
    }
    assert!(v["residuals"]["bg_field"].as_f64().unwrap() <= 1e-10);
    assert!(v["residuals"]["time_width"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn missing_flag_is_a_usage_error() {
    let out = slowlight(&["calibrate", "--omega0", "3.528e7", "--gamma", "6.3e7"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--tp"));
}

#[test]
fn malformed_number_is_a_usage_error() {
    let out = slowlight(&["calibrate", "--omega0", "fast", "--tp", "2.5e-6", "--gamma", "6.3e7"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_control_field_has_no_solution() {
    let out = slowlight(&["calibrate", "--omega0", "0", "--tp", "2.5e-6", "--gamma", "6.3e7"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(slowlight(&["--help"], &[]).status.code(), Some(0));
    assert_eq!(slowlight(&[], &[]).status.code(), Some(1));
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let out = slowlight(&["run", "--preset", "nope"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sodium"));
}

#[test]
fn config_errors_point_at_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"medium\": 3\n}\n").unwrap();
    let out = slowlight(&["run", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
}

#[test]
fn invalid_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg: Value = serde_json::from_str(slowlight_scenario::presets::SODIUM).unwrap();
    cfg["grid"]["n_tau"] = 4.into();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let out = slowlight(&["run", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`grid`"));
}

fn quick_config(dir: &Path, simulate: bool) -> std::path::PathBuf {
    let mut cfg: Value = serde_json::from_str(slowlight_scenario::presets::SODIUM).unwrap();
    cfg["grid"] = serde_json::json!({"n_zeta": 128, "n_tau": 128, "zeta_max": {"widths": 0.5}, "tau_max_s": 1e-6});
    cfg["emission"]["snapshot_taus_s"] = serde_json::json!([0.5e-6]);
    cfg["comparison"]["tau_limit_s"] = Value::Null;
    cfg["simulate"] = simulate.into();
    cfg["output_dir"] = dir.join("from_config").to_str().unwrap().into();
    let path = dir.join("quick.json");
    std::fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn output_dir_comes_from_flag_then_env_then_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = quick_config(dir.path(), false);
    let cfg = cfg.to_str().unwrap();

    let out = slowlight(&["run", "--config", cfg], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("from_config/report.json").exists());

    let env_dir = dir.path().join("from_env");
    let out = slowlight(&["run", "--config", cfg], &[("SLOWLIGHT_OUTPUT_DIR", &env_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(env_dir.join("trajectory.csv").exists());

    let flag_dir = dir.path().join("from_flag");
    let out = slowlight(
        &["run", "--config", cfg, "--output-dir", flag_dir.to_str().unwrap()],
        &[("SLOWLIGHT_OUTPUT_DIR", &env_dir)],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_dir.join("report.json").exists());
    let v = stdout_json(&out);
    assert_eq!(v["name"], "sodium");
}

#[test]
fn compare_prints_the_error_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = quick_config(dir.path(), true);
    let out_dir = dir.path().join("cmp");
    let out = slowlight(
        &[
            "compare",
            "--config",
            cfg.to_str().unwrap(),
            "--tau-limit",
            "5e-7",
            "--output-dir",
            out_dir.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["tau_last"].as_f64().unwrap() <= 5e-7);
    assert!(v["in_window_linf"].as_f64().unwrap() < 0.1);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("comparison.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
}

#[test]
fn sweep_reports_each_variant_and_flags_failures() {
    let dir = tempfile::tempdir().unwrap();
    let base: Value = serde_json::from_str(&std::fs::read_to_string(quick_config(dir.path(), false)).unwrap()).unwrap();
    let spec = serde_json::json!({
        "base": base,
        "variants": [
            {"name": "slow", "patch": {"medium": {"experiment": {"omega0": 2.0e7}}}},
            {"name": "fast", "patch": {"medium": {"experiment": {"omega0": 5.0e7}}}},
            {"name": "dead", "patch": {"medium": {"experiment": {"omega0": 0.0}}}}
        ]
    });
    let path = dir.path().join("sweep.json");
    std::fs::write(&path, spec.to_string()).unwrap();
    let out_dir = dir.path().join("sweep");
    let out = slowlight(&["sweep", "--spec", path.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let summary = std::fs::read_to_string(out_dir.join("sweep_summary.csv")).unwrap();
    let names: Vec<&str> = summary.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["slow", "fast", "dead"]);
    assert!(out_dir.join("slow/report.json").exists());
    assert!(out_dir.join("fast/report.json").exists());
}
