//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn kcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn classify_builtin_east() {
    let out = kcm(&["classify", "-f", "east1d"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("NotSupercriticalUnrooted"));
    assert!(text.contains("r=1"));
    assert!(text.contains("{-1}"));
}

#[test]
fn classify_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("east.json");
    std::fs::write(&path, r#"{"d":1,"rules":[[[-1]]]}"#).unwrap();
    let out = kcm(&["classify", "-f", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("NotSupercriticalUnrooted"));
}

#[test]
fn invalid_family_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"d":1,"rules":[[[0]]]}"#).unwrap();
    let out = kcm(&["classify", "-f", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = kcm(&["classify", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_east_threshold_passes() {
    let out = kcm(&["verify", "east-threshold", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("overall: pass"));
}

#[test]
fn verify_theorem_on_unrooted_family_reports_expected_refutation() {
    let out = kcm(&["verify", "theorem", "-f", "fa1f1", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0), "expected refutation is not a failure");
    assert!(stdout(&out).contains("refuted-expected"));
}

#[test]
fn reach_budget_zero_is_a_successful_query() {
    let out = kcm(&["reach", "-f", "fa1f1", "--box", "-3..3", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reachable=false"));
}

#[test]
fn reach_writes_a_verified_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = kcm(&[
        "reach",
        "-f",
        "east1d",
        "--box",
        "-2..2",
        "--budget",
        "2",
        "--certificate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reachable=true"));
    assert!(Path::new(&path).exists());
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["boundary"], "zero");
    assert_eq!(cert["n"], 2);
    assert!(cert["flips"].as_array().unwrap().len() >= 2);
}

#[test]
fn truncation_exits_with_code_three() {
    let out = kcm(&[
        "reach",
        "-f",
        "fa1f1",
        "--box",
        "-6..6",
        "--budget",
        "3",
        "--max-states",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("truncated=true"));
}

#[test]
fn sweep_emits_the_csv_header_and_threshold_rows() {
    let out = kcm(&["sweep", "-f", "east1d", "--n-max", "2", "--box-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,N,reachable,states,millis"));
    assert!(text.contains("east1d,2,2,true"));
    assert!(text.contains("east1d,2,3,false"));
}

#[test]
fn bootstrap_reports_closure_and_origin_step() {
    let out = kcm(&["bootstrap", "-f", "east1d", "--box", "0..5", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("closure=6 sites (full region: true)"));
    assert!(text.contains("steps=5"));
    assert!(text.contains("origin infected at step 0"));
}

#[test]
fn verify_writes_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = kcm(&[
        "verify",
        "lemma",
        "-f",
        "east1d",
        "--n-max",
        "2",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["task"]["kind"], "lemma-zero-outside");
}
