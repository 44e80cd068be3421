//! The command-line binary: output shape and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclic-sigma"))
}

fn curve_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclic-sigma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn describe_tables() {
    let f = curve_file("c29.json", r#"{"r":2,"s":9}"#);
    let o = run(&["describe", "--curve", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N row: 0 2 4 6 8 9 10 11"));
    let f = curve_file("c34d.json", r#"{"r":3,"s":4}"#);
    let o = run(&["describe", "--curve", f.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["natural"][1], serde_json::json!([2]));
    assert_eq!(v["natural"][2], serde_json::json!([3]));
    assert_eq!(v["young"]["rows"], serde_json::json!([3, 1, 1]));
}

#[test]
fn invalid_curve_exits_two() {
    let f = curve_file("c24.json", r#"{"r":2,"s":4}"#);
    let o = run(&["describe", "--curve", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not coprime"));
    let o = run(&["periods", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(run(&["verify", "--bogus"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_exits_zero() {
    let f = curve_file("g2.json", r#"{"r":2,"s":5,"lambda":[[0.1,0],[-1.2,0],[0.3,0],[0.4,0],[-0.2,0]]}"#);
    let out = f.with_file_name("report.json");
    let o = run(&["verify", "--curve", f.to_str().unwrap(), "--seed", "7", "--samples", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep["seed"], 7);
    assert!(rep["entries"].as_array().unwrap().iter().all(|e| e["pass"] == true));
}

#[test]
fn verify_exits_one_on_identity_failure() {
    let f = curve_file("g2b.json", r#"{"r":2,"s":5,"lambda":[[0.1,0],[-1.2,0],[0.3,0],[0.4,0],[-0.2,0]]}"#);
    let tol = f.with_file_name("tight.json");
    std::fs::write(&tol, r#"{"jacobi_x": 1e-30}"#).unwrap();
    let o = run(&["verify", "--curve", f.to_str().unwrap(), "--samples", "2", "--tol-file", tol.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL jacobi_x"));
}

#[test]
fn numeric_commands() {
    let f = curve_file("c34.json", r#"{"r":3,"s":4,"lambda":[[0.2,0.1],[-0.3,0],[0.1,-0.2],[-0.8,0.3]]}"#);
    let c = f.to_str().unwrap();
    let o = run(&["prime-form", "--curve", c, "--p", "0.3:0.2", "--q", "-0.4:0.5", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["ratio"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let o = run(&["sigma", "--curve", c, "--u", "0.1,-0.2:0.1,0.05", "--deriv", "2"]);
    assert!(o.status.success());
    let o = run(&["theta", "--curve", c, "--z", "0.1,0.2,-0.1:0.3", "--char", "0.5,0,0/0.5,0.5,0.5"]);
    assert!(o.status.success());
    let o = run(&["periods", "--curve", c, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["legendre_residual"].as_f64().unwrap() < 1e-8);
    let o = run(&["benney-demo", "--curve", c, "--points", "5"]);
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("u1_re,u1_im,core_re,core_im"));
}
