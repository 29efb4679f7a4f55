use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evanescent::{Density, EvanescentField, WaveguideConfig};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_evanescent"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().unwrap_or(-1),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn config(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// CSV body (comment lines skipped) as header + rows of cell text.
fn csv_cells(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

const THREE_POINTS: &str = r#"{"geometry": {"kc_l": [2.0]}, "frequency": {"count": 3, "min": 0.1, "max": 0.9}}"#;

#[test]
fn scatter_three_point_grid() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", THREE_POINTS);
    let out = run(&["scatter", "--config", s(&cfg)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(!out.stdout.contains('\r'));
    let (header, rows) = csv_cells(&out.stdout);
    assert_eq!(header, ["kc_l", "omega_over_omega_c", "t2", "r2", "arg_t_rad", "unitarity"]);
    assert_eq!(rows.len(), 3);
    for r in rows {
        let u: f64 = r[5].parse().unwrap();
        assert!((u - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", THREE_POINTS);
    for cmd in ["scatter", "velocity", "fields"] {
        let csv = run(&[cmd, "--config", s(&cfg), "--format", "csv"]);
        let json = run(&[cmd, "--config", s(&cfg), "--format", "json"]);
        assert_eq!((csv.code, json.code), (0, 0));
        let (header, rows) = csv_cells(&csv.stdout);
        let doc: Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(doc["columns"].as_array().unwrap().len(), header.len());
        let jrows = doc["rows"].as_array().unwrap();
        assert_eq!(jrows.len(), rows.len());
        // the literal numeric text must match, not only the parsed value
        let raw_rows: Vec<&str> = json.stdout.split('\n').map(str::trim).collect();
        for (crow, jrow) in rows.iter().zip(jrows) {
            for (c, j) in crow.iter().zip(jrow.as_array().unwrap()) {
                assert_eq!(c.parse::<f64>().unwrap(), j.as_f64().unwrap(), "{cmd}");
                assert!(raw_rows.iter().any(|l| l.trim_end_matches(',') == c), "{cmd}: {c}");
            }
        }
    }
}

#[test]
fn single_point_velocity_matches_library() {
    let dir = TempDir::new().unwrap();
    let json = format!(
        r#"{{"geometry": {{"kc_l": [2.0]}}, "frequency": {{"values": [{FRAC_1_SQRT_2:e}]}}, "z": {{"values": [0.99]}}, "density": "full"}}"#
    );
    let cfg = config(&dir, "c.json", &json);
    let out = run(&["velocity", "--config", s(&cfg)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let (_, rows) = csv_cells(&out.stdout);
    assert_eq!(rows.len(), 1);
    let cli: f64 = rows[0][3].parse().unwrap();

    let guide = WaveguideConfig::normalized(2.0, 0.5).unwrap();
    let mode = guide.mode(FRAC_1_SQRT_2 * guide.cutoff_frequency()).unwrap();
    let lib = EvanescentField::new(mode)
        .transport(0.99 * guide.length)
        .unwrap()
        .velocity_ratio(Density::Full);
    assert_eq!(cli, lib);
    assert!(out.stdout.contains("# summary.pass = true"));
}

#[test]
fn variant_velocity_approaches_light_speed_at_exit() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "c.json",
        r#"{"geometry": {"kc_l": [1.0]}, "frequency": {"values": [0.3, 0.7071067811865476, 0.9]}, "z": {"values": [0.5, 0.9, 0.999999999]}}"#,
    );
    let out = run(&["velocity", "--config", s(&cfg), "--density", "variant", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let summary = &doc["meta"]["summary"];
    assert_eq!(summary["pass"], true);
    let max = summary["max_v_bar_over_c"].as_f64().unwrap();
    assert!(max <= 1.0 + 1e-9 && max > 1.0 - 1e-6, "{max}");
    assert_eq!(summary["argmax"]["z_over_l"].as_f64(), Some(0.999999999));
    assert_eq!(doc["meta"]["density"], "variant");
}

#[test]
fn si_geometry_reproduces_normalized_run() {
    let dir = TempDir::new().unwrap();
    let a = 0.02286;
    let length = 2.0 * a / PI;
    let si = config(
        &dir,
        "si.json",
        &format!(r#"{{"unit_system": "si", "geometry": {{"a": {a}, "b": {}, "length": [{length:e}]}}, "frequency": {{"count": 4}}}}"#, a / 2.0),
    );
    let norm = config(&dir, "n.json", r#"{"geometry": {"kc_l": [2.0]}, "frequency": {"count": 4}}"#);
    let a_rows = csv_cells(&run(&["velocity", "--config", s(&si)]).stdout).1;
    let b_rows = csv_cells(&run(&["velocity", "--config", s(&norm)]).stdout).1;
    assert_eq!(a_rows.len(), b_rows.len());
    for (x, y) in a_rows.iter().zip(&b_rows) {
        let (vx, vy): (f64, f64) = (x[3].parse().unwrap(), y[3].parse().unwrap());
        assert!((vx - vy).abs() <= 1e-14, "{vx} {vy}");
    }
}

#[test]
fn propagator_series_and_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "c.json",
        r#"{"propagator": {"t_axis": {"count": 5, "min": 0, "max": 20}, "z_axis": {"count": 30, "min": 0, "max": 60}}}"#,
    );
    let out = run(&["propagator", "--config", s(&cfg), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let t: Vec<&Value> = rows.iter().filter(|r| r[0] == "t").collect();
    let z: Vec<f64> = rows.iter().filter(|r| r[0] == "z").map(|r| r[4].as_f64().unwrap()).collect();
    assert_eq!((t.len(), z.len()), (5, 30));

    let origin = t[0][2].as_f64().unwrap();
    let reference = 1.0 / (64.0 * PI * PI);
    assert!((origin - reference).abs() <= 1e-8 * reference);
    assert!(z.windows(2).all(|w| w[1] < w[0]));

    for axis in ["timelike", "spacelike"] {
        let fit = &doc["meta"]["fit"][axis];
        for key in ["exponent", "rate_over_omega_c", "residual"] {
            assert!(fit[key].as_f64().unwrap().is_finite(), "{axis}.{key}");
        }
    }
    assert_eq!(doc["meta"]["closed_form"].as_array().unwrap().len(), 5);
}

#[test]
fn frequency_at_cutoff_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", r#"{"frequency": {"values": [0.5, 1.0]}}"#);
    for cmd in ["scatter", "velocity", "verify"] {
        let out = run(&[cmd, "--config", s(&cfg)]);
        assert_eq!(out.code, 2, "{cmd}");
        assert!(out.stderr.contains("frequency.values[1]"), "{}", out.stderr);
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn empty_grid_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", r#"{"frequency": {"count": 0}}"#);
    let out = run(&["scatter", "--config", s(&cfg)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("frequency.count"), "{}", out.stderr);
}

#[test]
fn malformed_config_reports_position() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", "{\n  \"z\": {\"count\": 3},\n  \"densty\": \"full\"\n}\n");
    let out = run(&["scatter", "--config", s(&cfg)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown field `densty`"), "{}", out.stderr);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);

    let cfg = config(&dir, "d.json", r#"{"z": {"count": -1}}"#);
    let out = run(&["scatter", "--config", s(&cfg)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("z.count"), "{}", out.stderr);
}

#[test]
fn bad_flags_are_config_errors() {
    assert_eq!(run(&["scatter", "--threads", "0"]).code, 2);
    assert_eq!(run(&["scatter", "--tol", "-1"]).code, 2);
    assert_eq!(run(&["velocity", "--density", "partial"]).code, 2);
    assert_eq!(run(&["scatter", "--format", "xml"]).code, 2);
}

#[test]
fn unreachable_tolerance_is_a_numerical_failure() {
    let out = run(&["verify", "--tol", "1e-30"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("did not converge"), "{}", out.stderr);
}

#[test]
fn flags_override_config_and_out_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("table.json");
    let cfg = config(
        &dir,
        "c.json",
        &format!(r#"{{"format": "csv", "out": "{}", "frequency": {{"count": 2}}}}"#, dir.path().join("ignored.csv").display()),
    );
    let out = run(&["scatter", "--config", s(&cfg), "--format", "json", "--out", s(&target)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    assert!(!dir.path().join("ignored.csv").exists());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn outputs_are_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "c.json", THREE_POINTS);
    for cmd in ["scatter", "velocity", "fields", "propagator"] {
        let one = run(&[cmd, "--config", s(&cfg), "--threads", "1"]);
        let many = run(&[cmd, "--config", s(&cfg), "--threads", "8"]);
        assert_eq!(one.code, 0);
        assert_eq!(one.stdout, many.stdout, "{cmd}");
    }
}
