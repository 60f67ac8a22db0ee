use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbicurve")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_examples() {
    let out = run(&["classify", "--genus", "0", "--marks", "2,3,7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["kappa"], 1);
    assert_eq!(v["degree"], "1/42");

    let v = stdout_json(&run(&["classify", "--genus", "0", "--marks", "2,2"]));
    assert_eq!(v["kappa"], "-inf");
    let v = stdout_json(&run(&["classify", "--marks", "2,3,6"]));
    assert_eq!(v["kappa"], 0);
    assert_eq!(v["degree"], "0");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["classify", "--marks", "2,3,7", "--colour", "red"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--marks", "1,3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--marks", "2,3,7", "--height", "ten"]).status.code(), Some(2));
    assert_eq!(run(&["pluriform", "--p0", "1"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn sextic_seed_seven() {
    let out = run(&["sextic", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["base_point_count"], 26);
    assert_eq!(v["H_degree"], 12);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let out = run(&["enumerate", "--marks", "2,3,7", "--height", "1e4", "--exclude-primes", "2,3", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let env: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(env["manifest"]["command"], "enumerate");
    assert!(env["manifest"].get("timing_ms").is_none());
    for p in env["result"]["points"].as_array().unwrap() {
        assert!(p["valuations"].as_array().unwrap().len() == 3);
    }
}

#[test]
fn report_verifies_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    assert_eq!(run(&["sextic", "--seed", "3", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    let out = run(&["report", path.to_str().unwrap(), "--rerun"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["digests_match"], true);
    assert_eq!(v["rerun_matches"], true);

    let mut env: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    env["result"]["base_point_count"] = 25.into();
    fs::write(&path, serde_json::to_vec(&env).unwrap()).unwrap();
    let out = run(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["digests_match"], false);
}

#[test]
fn fractions_are_strings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let out = run(&["bounds", "hurwitz", "--genus", "2", "--marks", "2,3,7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"epsilon\": \"1/42\""));
    let env: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(env["result"]["bound"], 84);
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    run(&["classify", "--marks", "2,3,7", "--timing", "--out", path.to_str().unwrap()]);
    let env: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert!(env["manifest"]["timing_ms"].is_u64());
}

#[test]
fn pluriform_w4_passes_its_suite() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("m.txt");
    let out = run(&["pluriform", "--kind", "w4", "--trials", "2", "--trunc", "16", "--matrix-text", text.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["shape"], serde_json::json!([27, 29]));
    assert_eq!(v["kernel_dimension"], 2);
    assert_eq!(v["suite"]["passed"], true);
    assert_eq!(fs::read_to_string(&text).unwrap().lines().count(), 27);
}

#[test]
fn section_check_reports_violations() {
    // t² meets 1 transversally at t = ±1, which (2, 2, 2) forbids
    let v = stdout_json(&run(&["section-check", "--a", "0,0,1", "--marks", "2,2,2"]));
    assert_eq!(v["is_orbifold_section"], false);
    assert_eq!(v["hurwitz"]["holds"], true);
    let out = run(&["section-check", "--a", "0,0,1", "--marks", "2,2,2", "--bad", "1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["is_orbifold_section"], true);
}

#[test]
fn fiber_multiplicities() {
    let v = stdout_json(&run(&["fiber", "--fiber", "inf=2,2,2,3,3"]));
    assert_eq!(v["fibers"]["inf"]["m"], 2);
    assert_eq!(v["fibers"]["inf"]["m_star"], 1);
    assert_eq!(run(&["fiber", "--fiber", "broken"]).status.code(), Some(2));
}
