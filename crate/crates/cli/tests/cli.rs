use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsp4gl2"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

#[test]
fn verify_worked_case2() {
    let out = run(&["verify-nonarch", "--params", data("case2_worked.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["pass"], true);
    assert_eq!(r["lhs_vs_hq"]["matches"], true);
    assert_eq!(r["lhs_vs_rhs"]["matches"], true);
    assert_eq!(r["lhs"][1], serde_json::json!({"rat": "0", "sqrt": "3/4"}));
}

#[test]
fn verify_array_and_order_override() {
    let out = run(&["verify-nonarch", "--params", data("case_mixed.json").to_str().unwrap(), "--order", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["pass"] == true && r["order"] == 5));
}

#[test]
fn negative_control_fails() {
    let out = run(&["verify-nonarch", "--corrupt-y", "--params", data("case2_worked.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[0]["pass"], false);
}

#[test]
fn bad_input_exits_2() {
    let out = run(&["verify-nonarch", "--params", data("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = run(&["verify-nonarch", "--params", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["cosets", "--p", "3", "--method", "full"]).status.code(), Some(2));
    assert_eq!(run(&["cosets", "--p", "2", "--method", "sideways"]).status.code(), Some(2));
}

#[test]
fn invalid_instance_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data("case2_worked.json")).unwrap().replace("\"3\"}, \"n\"", "\"0\"}, \"n\"");
    std::fs::write(&p, text).unwrap();
    let out = run(&["verify-nonarch", "--params", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn cosets_p2() {
    let out = run(&["cosets", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0]["report"];
    assert_eq!(r["classes"], 2);
    let total: u64 = r["sizes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 20160);
    assert_eq!(r["reps"].as_array().unwrap().len(), 2);
}

#[test]
fn dims_and_gamma() {
    let out = run(&["dims"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).len(), (0..=6).map(|n| 13 - n).sum::<usize>());
    let out = run(&["gamma-selftest", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(lines(&out).iter().all(|r| r["pass"] == true));
}

#[test]
fn arch_and_global() {
    let out = run(&["arch-verify", "--spec", data("arch_worked.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert!(reports[0]["rel_err"].as_f64().unwrap() < 1e-6);
    assert!(reports[1]["note"].is_string());
    let out = run(&["global-constant", "--spec", data("global_worked.json").to_str().unwrap(), "--s", "1.5,0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let g = &lines(&out)[0];
    let want = 3f64.powf(-8.5) * 2f64.powi(-34) * 1_307_674_368_000.0;
    assert!((g["constant"]["value"]["re"].as_f64().unwrap() / want - 1.0).abs() < 1e-14);
    assert_eq!(g["y_infty"].as_array().unwrap().len(), 1);
}

#[test]
fn sweep_is_deterministic_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let st = bin().args(["sweep", "--seed", "5", "--per-suite", "3", "--out", a.to_str().unwrap()]).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let st = bin()
        .env("GSP4GL2_WORKERS", "1")
        .args(["--out", b.to_str().unwrap(), "sweep", "--seed", "5", "--per-suite", "3"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let last: Value = serde_json::from_str(String::from_utf8(ta).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(last["failures"], 0);
    assert_eq!(last["total"], 30);
}

#[test]
fn corrupted_sweep_echoes_rerunnable_failures() {
    let out = run(&["sweep", "--seed", "9", "--per-suite", "2", "--corrupt-y"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = lines(&out);
    let failures: Vec<_> = reports.iter().filter(|r| r.get("failure").is_some()).collect();
    assert!(!failures.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fail.json");
    std::fs::write(&p, serde_json::to_string(&failures[0]["instance"]).unwrap()).unwrap();
    // the echoed instance is valid input and passes without the corruption
    let out = run(&["verify-nonarch", "--params", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify-nonarch", "--corrupt-y", "--params", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
