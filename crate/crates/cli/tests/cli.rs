use std::process::{Command, Output};

use pbkit::system::builtin_source;

fn pbkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbkit")).args(args).output().expect("spawn pbkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn commuting_bracket_prints_zero() {
    let o = pbkit(&["bracket", "A1", "A2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn bracket_of_angular_momenta() {
    let o = pbkit(&["bracket", "J1", "J2"]);
    // J3 = x*py - y*px in canonical order
    assert_eq!(stdout(&o).trim(), "-px*y + py*x");
}

#[test]
fn fit_structure_leads_with_k1_term() {
    let o = pbkit(&["fit-structure", "A2", "B2", "--extra", "A1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("-4*k1*A1^2"), "{out}");
}

#[test]
fn fit_structure_for_commuting_pair_is_an_input_error() {
    let o = pbkit(&["fit-structure", "A1", "A2", "--extra", "B1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_on_builtin_system() {
    let o = pbkit(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("vanishing brackets: {A1,A2} {A1,B2} {A2,B1} {B2,F}"));
    assert!(out.trim_end().ends_with("verify: pass"));
}

#[test]
fn verify_treats_misprints_as_failures_when_asked() {
    let o = pbkit(&["--allow-paper-typos", "false", "verify"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_rejects_perturbed_integral() {
    let src = builtin_source();
    let mutated = src.replacen("k3*x^2/z^2", "2*k3*x^2/z^2", 1);
    assert_ne!(src, mutated);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mutated.psys");
    std::fs::write(&path, mutated).unwrap();
    let o = pbkit(&["--system", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first integral B2   FAIL"));
}

#[test]
fn unknown_system_and_bad_usage_exit_two() {
    assert_eq!(pbkit(&["--system", "nope", "catalog"]).status.code(), Some(2));
    assert_eq!(pbkit(&["bracket", "A1"]).status.code(), Some(2));
    assert_eq!(pbkit(&["bracket", "A1", "M"]).status.code(), Some(2));
    assert_eq!(pbkit(&["--param-degree", "99", "catalog"]).status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    let a = pbkit(&["--format", "json", "independence"]);
    let b = pbkit(&["--format", "json", "independence"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["linear_relation"].is_null());
}

#[test]
fn orbit_writes_csv_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.csv");
    let o = pbkit(&["--duration", "1", "orbit", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next(), Some("t,x,y,z,px,py,pz"));
    assert_eq!(csv.lines().count(), 1002);
}

#[test]
fn orbit_rejects_bad_step() {
    assert_eq!(pbkit(&["--step", "-1", "orbit"]).status.code(), Some(2));
}

#[test]
fn catalog_json_lists_functions() {
    let o = pbkit(&["--format", "json", "catalog"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["functions"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    for n in ["H", "A1", "A2", "B1", "B2", "F"] {
        assert!(names.contains(&n), "{n}");
    }
}
