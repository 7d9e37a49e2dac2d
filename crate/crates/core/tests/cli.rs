//! End-to-end tests of the `isodirac` binary: exit codes, report fields,
//! and the documented failure modes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isodirac"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("isodirac-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn build_and_zcompare_honeycomb() {
    let surface = tmp("hex.json");
    let out = run(&["build", "honeycomb", "3", "3", "-o", surface.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["zcompare", surface.to_str().unwrap(), "--nu", "unit", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["matchings"], 42);
    assert_eq!(report["z_brute"], 42.0);
    assert_eq!(report["z_pfd"], 42.0);
    assert_eq!(report["z_pfarf"], 42.0);
    assert_eq!(report["pass"], true);
    let dets: Vec<f64> = report["sectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["det_abs"].as_f64().unwrap())
        .collect();
    let mut sorted = dets.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(sorted[0] < 1e-9);
    assert_eq!(&sorted[1..], &[28.0, 28.0, 28.0]);
}

#[test]
fn check_exit_codes_discriminate() {
    let good = tmp("rt-good.json");
    let bad = tmp("rt-shifted.json");
    assert!(run(&["build", "rtorus", "6", "6", "-o", good.to_str().unwrap()]).status.success());
    assert!(run(&[
        "build",
        "rtorus",
        "6",
        "6",
        "--shift",
        "1",
        "-o",
        bad.to_str().unwrap()
    ])
    .status
    .success());

    let out = run(&["check", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["check", bad.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1), "condition failure exits 1");
    let report = stdout_json(&out);
    assert_eq!(report["condition_i"], true);
    assert_eq!(report["condition_ii"], false);
    let residues: Vec<f64> = report["residues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_f64().unwrap())
        .collect();
    assert!(residues.iter().any(|r| r.abs() >= 1e-2), "{residues:?}");
}

#[test]
fn validate_reports_broken_files() {
    let path = tmp("broken.json");
    let good = tmp("hex-val.json");
    assert!(run(&["build", "honeycomb", "2", "3", "-o", good.to_str().unwrap()])
        .status
        .success());
    let out = run(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // break one white angle sum
    let text = std::fs::read_to_string(&good).unwrap();
    let broken = text.replacen("2.0943951023931953", "2.0", 1);
    std::fs::write(&path, broken).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "invalid input exits 2");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("angle"), "stderr: {err}");
}

#[test]
fn homology_and_spins_reports() {
    let surface = tmp("hex-hom.json");
    assert!(run(&["build", "honeycomb", "3", "3", "-o", surface.to_str().unwrap()])
        .status
        .success());

    let out = run(&["homology", surface.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["genus"], 1);
    assert_eq!(report["intersection_matrix"], serde_json::json!([[0, 1], [1, 0]]));

    let out = run(&["spins", surface.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["count"], 4);
    let mut arfs: Vec<u64> = report["structures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["arf"].as_u64().unwrap())
        .collect();
    arfs.sort();
    assert_eq!(arfs, vec![0, 0, 0, 1]);

    let out = run(&["kasteleyn", surface.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["count"], 4);
}

#[test]
fn dbar_command() {
    let surface = tmp("hex-dbar.json");
    assert!(run(&["build", "honeycomb", "2", "2", "-o", surface.to_str().unwrap()])
        .status
        .success());
    // constant function on the blacks: v4..v7 in the default naming
    let f = tmp("const.json");
    std::fs::write(&f, r#"{"v4": [1.5, -0.5], "v5": [1.5, -0.5], "v6": [1.5, -0.5], "v7": [1.5, -0.5]}"#)
        .unwrap();
    let out = run(&["dbar", surface.to_str().unwrap(), f.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["discrete_holomorphic"], true);
    for row in report["values"].as_array().unwrap() {
        assert!(row["abs"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn zcompare_refuses_large_graphs() {
    let surface = tmp("rt-large.json");
    assert!(run(&["build", "rtorus", "6", "6", "-o", surface.to_str().unwrap()])
        .status
        .success());
    let out = run(&["zcompare", surface.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "72 vertices exceed the brute-force cap");
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
}

#[test]
fn usage_error_exits_2() {
    let out = run(&["zcompare", "/nonexistent.json", "--nu", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let surface = tmp("hex-det.json");
    assert!(run(&["build", "honeycomb", "3", "3", "-o", surface.to_str().unwrap()])
        .status
        .success());
    let a = run(&["zcompare", surface.to_str().unwrap(), "--nu", "unit", "--seed", "7", "--json"]);
    let b = run(&["zcompare", surface.to_str().unwrap(), "--nu", "unit", "--seed", "7", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
