use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn toricdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricdiv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn fan_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn constructed(args: &[&str]) -> tempfile::NamedTempFile {
    let out = toricdiv(&[&["construct"], args].concat());
    assert!(out.status.success());
    fan_file(&String::from_utf8(out.stdout).unwrap())
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn construct_projective_plane() {
    let out = toricdiv(&["construct", "pn", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["rays"], serde_json::json!([[1, 0], [0, 1], [-1, -1]]));
    assert_eq!(v["max_cones"].as_array().unwrap().len(), 3);
}

#[test]
fn construct_rejects_bad_weights() {
    let out = toricdiv(&["construct", "wps", "2", "2", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_projective_plane() {
    let f = constructed(&["pn", "2"]);
    let v = json(&toricdiv(&["classify", path(&f)]));
    assert_eq!(v["case"], "ProjectiveSpace");
    assert_eq!(v["N"], 3);
    assert_eq!(v["status"], "ok");
}

#[test]
fn classify_bundle_reports_normalized_twists() {
    let f = constructed(&["bundle", "1", "3"]);
    let v = json(&toricdiv(&["classify", path(&f)]));
    assert_eq!(v["case"], "P1Bundle");
    assert_eq!(v["certificates"]["q"], serde_json::json!([0, 2]));
}

#[test]
fn classify_hirzebruch_three_is_unclassified() {
    let f = constructed(&["bundle", "0", "3"]);
    let out = toricdiv(&["classify", path(&f)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["case"], "Unclassified");
    assert_eq!(v["N"], 1);
}

#[test]
fn classify_weighted_and_flop_target() {
    let f = constructed(&["wps", "1", "1", "2", "2"]);
    assert_eq!(json(&toricdiv(&["classify", path(&f)]))["case"], "WPS_1_1_2");
    let f = constructed(&["floptarget", "3"]);
    assert_eq!(json(&toricdiv(&["classify", path(&f)]))["case"], "FlopTarget");
}

#[test]
fn contract_negative_section() {
    let f = constructed(&["bundle", "0", "2"]);
    let out = toricdiv(&["contract", path(&f), "--ray", "-2,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["type"], "divisorial");
    assert_eq!(v["crepant"], true);
    assert_eq!(v["target"]["rays"].as_array().unwrap().len(), 3);
}

#[test]
fn contract_fiber_class_gives_fibration() {
    let f = constructed(&["bundle", "0", "2"]);
    let v = json(&toricdiv(&["contract", path(&f), "--ray", "1,0"]));
    assert_eq!(v["type"], "fibration");
    assert_eq!(v["target"]["dim"], 1);
}

#[test]
fn contract_non_extremal_ray_lists_alternatives() {
    let f = constructed(&["bundle", "0", "2"]);
    let out = toricdiv(&["contract", path(&f), "--ray", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not extremal") && err.contains("[-2,1]"), "{err}");
}

#[test]
fn contracting_projective_space_is_unsupported() {
    let f = constructed(&["pn", "2"]);
    let out = toricdiv(&["contract", path(&f), "--ray", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported_fibration"));
}

#[test]
fn malformed_and_invalid_fans_are_input_errors() {
    let f = fan_file("{\"dim\": 2, \"rays\": ");
    assert_eq!(toricdiv(&["classify", path(&f)]).status.code(), Some(2));
    let f = fan_file(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2]]}"#);
    assert_eq!(toricdiv(&["classify", path(&f)]).status.code(), Some(2));
    assert_eq!(toricdiv(&["classify", "/nonexistent/fan.json"]).status.code(), Some(2));
}

#[test]
fn analyze_reports_invariants() {
    let f = constructed(&["bundle", "0", "2"]);
    let d = fan_file(r#"{"coeffs": [1, 0, 0, 0]}"#);
    let v = json(&toricdiv(&["analyze", path(&f), "--divisor", path(&d)]));
    assert_eq!(v["rho"], 2);
    assert_eq!(v["divisibility"]["N"], "2");
    assert_eq!(v["mori_cone"].as_array().unwrap().len(), 2);
    assert_eq!(v["divisor"]["cartier"], true);
}

#[test]
fn verify_small_suite_passes() {
    let out = toricdiv(&["verify", "--suite", "paper", "--max-n", "3", "--weight-bound", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(String::from_utf8_lossy(&out.stderr).matches("PASS").count(), 10);
}

#[test]
fn corrupted_fixture_fails_with_reproducer() {
    let out = toricdiv(&["verify", "--max-n", "3", "--weight-bound", "4", "--inject-corrupt"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let first = &v["checks"][0];
    assert_eq!(first["passed"], false);
    assert_eq!(first["reproducer"]["name"], "F_1");
}

#[test]
fn output_is_deterministic() {
    let f = constructed(&["floptarget", "4"]);
    let a = toricdiv(&["analyze", path(&f)]);
    let b = toricdiv(&["analyze", path(&f)]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
