//! End-to-end runs of the `g2kit` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use g2kit::harness::{Status, SuiteReport};

fn g2kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2kit")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn report(args: &[&str]) -> SuiteReport {
    let out = g2kit(args);
    serde_json::from_slice(&out.stdout).expect("valid report JSON")
}

#[test]
fn identities_text_matches_golden() {
    let out = g2kit(&["identities"]);
    let expected = std::fs::read(golden("identities.txt")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&expected));
}

#[test]
fn exit_code_tracks_failures() {
    // |X∧ω|² = 2|X|², so the identity suite carries one failing check
    assert_eq!(g2kit(&["identities"]).status.code(), Some(1));
    assert_eq!(g2kit(&["bryant-salamon"]).status.code(), Some(0));
    assert_eq!(g2kit(&["no-such-suite"]).status.code(), Some(2));
    assert_eq!(g2kit(&["identities", "--ring-d", "5"]).status.code(), Some(2));
    assert_eq!(g2kit(&["identities", "--mc-scale", "2"]).status.code(), Some(2));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = ["bryant-salamon", "--format", "json"];
    let a = report(&args);
    assert_eq!(a.schema_version, 1);
    assert!(a.checks.iter().all(|c| !c.reference.is_empty()));
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<SuiteReport>(&text).unwrap(), a);
    let mut b = report(&args);
    b.timing_ms = a.timing_ms;
    assert_eq!(a, b);
}

#[test]
fn uncalibrated_scale_fails_the_calibration() {
    let r = report(&["su2su2-classify", "--mc-scale", "1", "--format", "json"]);
    let status = |n: &str| r.checks.iter().find(|c| c.name == n).unwrap().status;
    assert_eq!(status("maurer_cartan_scale"), Status::Fail);
    assert_eq!(status("d_squared_zero"), Status::Pass);
}

#[test]
fn flags_override_config() {
    let cfg = std::env::temp_dir().join(format!("g2kit-cfg-{}.json", std::process::id()));
    std::fs::write(&cfg, r#"{"grid_points": 8, "tol": 1e-6}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let r = report(&["su3", "--config", c, "--grid-points", "4", "--format", "json"]);
    assert_eq!(r.series[0].rows.len(), 3);
    assert!(r.checks.iter().any(|x| x.expected == "<= 1e-6"));
    std::fs::write(&cfg, r#"{"grid": 8}"#).unwrap();
    assert_eq!(g2kit(&["su3", "--config", c]).status.code(), Some(2));
    std::fs::remove_file(&cfg).unwrap();
}

#[test]
fn decay_series_has_one_row_per_sample() {
    let out = g2kit(&["gamma-family", "--gamma", "2", "--series", "decay"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,phi_difference,psi_difference"));
    let ts: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ts.len(), 25);
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn csv_report_has_header_and_rows() {
    let out = g2kit(&["hypo-flow", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,name,status,expected,got,residual,reference\n"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("g2kit-out-{}.txt", std::process::id()));
    let out = g2kit(&["bryant-salamon", "--out", path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("suite bryant-salamon"));
    std::fs::remove_file(&path).unwrap();
}
