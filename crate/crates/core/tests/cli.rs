//! Runs the `quiver-forms` binary on the fixture files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run_with(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quiver-forms"));
    cmd.args(args).env_remove("QUIVER_FORMS_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn stable_kronecker_over_f2() {
    let out = run(&["stability", &path("kronecker_f2.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "stability");
    assert_eq!(v["result"]["stability"]["verdict"], "Stable");
    assert_eq!(v["result"]["geometrically_stable"], true);
}

#[test]
fn zero_rep_summary_names_the_witness() {
    let out = run(&["--format", "table", "stability", &path("zero_kronecker_f2.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("Unstable; witness e=(1,0), slope 1"));
}

#[test]
fn hn_reports_steps() {
    let out = run(&["hn", &path("hn_jordan_f3.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let text = v.to_string();
    assert!(text.contains("slopes"), "{text}");
}

#[test]
fn rational_certificate_uses_prime_five() {
    let out = run(&["stability", &path("rational_kronecker_qi.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["certificate_prime"], 5);
    assert_eq!(v["result"]["summary"], "Stable; geometrically stable (certified at p = 5)");
}

#[test]
fn quaternionic_typemap_and_forms() {
    let out = run(&["typemap", &path("quaternionic_kronecker.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["class_display"], "(-1,-1)_Q");
    assert_eq!(v["result"]["class"]["index"], 2);

    let dest = scratch("drep.json");
    let out = run(&["typemap", &path("quaternionic_kronecker.json"), "--descend", "--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = quiver_forms::io::read_json(&dest).unwrap();
    let drep = quiver_forms::io::rep_from_value(&written, "$").unwrap().into_drep().unwrap();
    assert_eq!(drep.dims.0, vec![1, 1]);

    let out = run(&["divform", &path("quaternionic_datum.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["algebra"], "(-1,-1)_Q");
}

#[test]
fn non_fixed_orbit_is_an_answer() {
    let out = run(&["typemap", &path("kronecker_1_i.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["status"], "not_fixed");
    assert_eq!(v["result"]["summary"], "orbit not Galois-fixed");
}

#[test]
fn descend_trivial_datum() {
    let out = run(&["descend", &path("trivial_datum.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["form"]["ring"]["type"], "rational");
}

#[test]
fn twisted_validation_reports_problems() {
    let good = json(&run(&["twisted-validate", &path("quaternionic_twisted.json")]));
    assert_eq!(good["result"]["ok"], true);
    assert_eq!(good["result"]["twisted_dims"], serde_json::json!([1, 1]));
    let bad = json(&run(&["twisted-validate", &path("bad_twisted.json")]));
    assert_eq!(bad["result"]["ok"], false);
    assert!(!bad["result"]["problems"].as_array().unwrap().is_empty());
}

#[test]
fn census_fits_q_plus_one() {
    let out = run(&["census", "kronecker", "--dims", "1,1", "--theta", "1,-1", "--q", "2,3,5", "--verify-descent", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["summary"].as_str().unwrap().split("; ").next(), Some("counts 3,4,6"));
    assert_eq!(v["result"]["fit"]["display"], "q + 1");
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let out = run(&["stability", &path("malformed.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["kind"], "parse");
    assert!(v["message"].as_str().unwrap().contains("line"));
}

#[test]
fn wrong_theta_length_is_invalid_input() {
    let out = run(&["hn", &path("hn_jordan_f3.json"), "--theta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["kind"], "input");
}

#[test]
fn oversized_census_exits_with_budget_code() {
    let out = run(&["census", "kronecker", "--dims", "3,3", "--theta", "1,-1", "--q", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["kind"], "budget");
    assert_eq!(v["estimate"], "3814697265625");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["typemap", &path("quaternionic_kronecker.json"), "--descend"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_and_config_are_embedded() {
    let v = json(&run(&["--seed", "99", "stability", &path("kronecker_f2.json"), "--theta", "1,-1"]));
    assert_eq!(v["seed"], 99);
    assert_eq!(v["config"]["seed"], 99);

    let cfg = scratch("config.json");
    std::fs::write(&cfg, r#"{"seed": 7, "primes": [5, 13]}"#).unwrap();
    let out = run_with(&["stability", &path("rational_kronecker_qi.json"), "--theta", "1,-1"], &[("QUIVER_FORMS_CONFIG", &cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["primes"], serde_json::json!([5, 13]));
    assert_eq!(v["result"]["attempts"].as_array().unwrap().len(), 1);

    let bad = scratch("bad_config.json");
    std::fs::write(&bad, r#"{"seeds": 7}"#).unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "stability", &path("kronecker_f2.json"), "--theta", "1,-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_rejected() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn d_representations_are_decided_on_the_split_image() {
    let v = json(&run(&["stability", &path("drep_one_i_j.json"), "--theta", "1,-1"]));
    assert_eq!(v["result"]["geometrically_stable"], true);
    let v = json(&run(&["stability", &path("drep_one_one_one.json"), "--theta", "1,-1"]));
    assert_eq!(v["result"]["stability"]["verdict"], "StrictlySemistable");
    assert_eq!(v["result"]["stability"]["witness"]["dims"], serde_json::json!([1, 1]));
}
