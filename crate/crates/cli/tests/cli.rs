//! End-to-end tests of the `kn` binary: golden outputs, formats, and the
//! stable exit-code contract (0 ok, 1 verification failure, 2 parse error,
//! 3 domain/config error).

use std::process::{Command, Output};

fn kn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn eval_golden_values() {
    let out = kn(&["eval", "c2(V[2], V[-2])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-6");

    let out = kn(&["--points", "2", "eval", "bracket(e[1], e[-1])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-2*e[0]");

    let out = kn(&["eval", "C1J(G[3])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-3*G*[-3] - 2*al^2*G*[-1]");
}

#[test]
fn eval_with_beta_specialization() {
    let out = kn(&["--beta", "2", "eval", "c2(V[4], V[-2])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-768");

    let out = kn(&["--beta", "1/2", "eval", "al"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/4");
}

#[test]
fn eval_with_connection() {
    let out = kn(&["--connection", "(z^2 - al^2)^-1", "eval", "c2(V[2], V[-2])"]);
    assert!(out.status.success());
    // A different connection shifts the raw cocycle by a coboundary.
    assert_ne!(stdout(&out), "");
}

#[test]
fn exit_codes() {
    // 2: parse error.
    let out = kn(&["eval", "c2(V[2]"]);
    assert_eq!(out.status.code(), Some(2));
    // 3: type/domain/config errors.
    assert_eq!(kn(&["eval", "pair(V[0], V[0])"]).status.code(), Some(3));
    assert_eq!(kn(&["--beta", "0", "eval", "al"]).status.code(), Some(3));
    assert_eq!(kn(&["--points", "2", "table", "C1L"]).status.code(), Some(3));
    assert_eq!(kn(&["verify", "bogus"]).status.code(), Some(3));
    // 0: success.
    assert_eq!(kn(&["verify", "uniqueness", "--window", "4"]).status.code(), Some(0));
}

#[test]
fn table_json_schema() {
    let out = kn(&["table", "c2", "--window", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = v.as_array().expect("array");
    assert!(rows
        .iter()
        .any(|r| r["left"] == "V[2]" && r["right"] == "V[-2]" && r["value"] == "-6"));

    let out = kn(&["table", "C1L", "--window", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = v.as_array().expect("array");
    let v4 = rows
        .iter()
        .find(|r| r["arg"] == "V[4]")
        .expect("V[4] present");
    assert_eq!(v4["coeffs"]["V*[-4]"], "-60");
    assert_eq!(v4["coeffs"]["V*[-2]"], "-48*al^2");
}

#[test]
fn table_csv_flattens_coefficients() {
    let out = kn(&["table", "C1J", "--window", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("arg,dual,coeff"));
    assert!(text.contains("G[3],G*[-3],-3"));
    assert!(text.contains("G[3],G*[-1],-2*al^2"));
}

#[test]
fn verify_report_schema() {
    let out = kn(&[
        "verify",
        "duality",
        "--window",
        "3",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["suite"], "duality");
    assert_eq!(v["config"]["points"], 3);
    assert_eq!(v["config"]["seed"], 7);
    let checks = v["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert!(c["id"].is_string());
        assert!(c["detail"].is_string());
    }
}

#[test]
fn verify_runs_are_deterministic() {
    let a = kn(&["verify", "axioms", "--window", "3", "--seed", "11", "--format", "csv"]);
    let b = kn(&["verify", "axioms", "--window", "3", "--seed", "11", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn two_point_tables() {
    let out = kn(&["--points", "2", "table", "c2", "--window", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("e[2],e[-2],-6"));
    assert!(text.contains("b[3/2],b[-3/2],4"));
}

#[test]
fn scalar_and_density_expressions() {
    // Scalar arithmetic with the sqrt(2) symbol stays exact.
    let out = kn(&["eval", "(1 + s)*(1 - s)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-1");
    // Powers of al.
    let out = kn(&["eval", "al^3 - al*al^2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0");
    // dot lands in the right weight and renders in basis coordinates.
    let out = kn(&["eval", "dot(phi[1/2], phi[-1/2])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2*V[0]");
    // Linear combinations evaluate inside calls.
    let out = kn(&["eval", "c2(V[1] + al^2*V[-1], V[-1])"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0");
}

#[test]
fn json_eval_output() {
    let out = kn(&["--format", "json", "eval", "c2(V[2], V[-2])"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["value"], "-6");
}
