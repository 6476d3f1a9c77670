use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorentz-approx"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const P1: &str = r#"{"pieces":[{"t0":0,"t1":1,"v":1}],"tail":{"T":1,"c":1,"gamma":1}}"#;
const S1: &str = r#"{"atoms":[{"a":0,"b":1,"v":3},{"a":1,"b":3,"v":1}]}"#;

#[test]
fn norm_of_p1() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p1.json", P1);
    let out = bin(&[
        "norm", "--input", &input, "--p", "2", "--q", "2", "--alpha", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let lp = v["lp"].as_f64().unwrap();
    assert!((lp - std::f64::consts::SQRT_2).abs() < 1e-14);
    assert!((v["lorentz"].as_f64().unwrap() - lp).abs() < 1e-12);
    assert_eq!(v["weak_lorentz"].as_f64(), Some(1.0));
    // L_{1,2}: ∫₁^∞ (t·t^{-1})² dt/t diverges
    assert_eq!(v["lorentz_p1"], "inf");
}

#[test]
fn error_decay_of_p1() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p1.json", P1);
    let out = bin(&["error-decay", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        if cols[0] >= 1.0 {
            assert!((cols[2] - 1.0).abs() < 1e-14);
        }
        rows += 1;
    }
    assert_eq!(rows, 121);
}

#[test]
fn best_approx_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s1.json", S1);
    let out = bin(&["best-approx", "--input", &input, "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["error"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(v["approximant"]["atoms"].as_array().unwrap().len(), 1);

    let dest = dir.path().join("approx.csv");
    let out = bin(&[
        "best-approx",
        "--input",
        &input,
        "--sigma",
        "1",
        "--format",
        "csv",
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual_error="));
    let csv = fs::read_to_string(dest).unwrap();
    assert_eq!(csv.lines().next(), Some("a,b,v"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn sampled_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s1.csv", "x,value\n0,3\n1,1\n2,1\n");
    let out = bin(&["best-approx", "--input", &input, "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["error"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn kfunc_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s1.json", S1);
    let out = bin(&["kfunc", "--input", &input, "--p1", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,k_lower,k_upper"));
    assert_eq!(text.lines().count(), 42);
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[1] <= cols[2]);
    }
    let bracket: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(bracket["lower"].as_f64().unwrap() <= bracket["upper"].as_f64().unwrap());

    let out = bin(&["kfunc", "--input", &input, "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 41);
}

#[test]
fn verify_user_functions() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "list.json", &format!("[{P1}, {S1}]"));
    let out = bin(&["verify", "--input", &input, "--format", "csv"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("name,lhs,rhs,ratio,constant_claimed,pass,inputs,min_ratio,max_ratio,n")
    );
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn verify_builtin_is_deterministic() {
    let a = bin(&["verify", "--seed", "3", "--q", "2"]);
    let b = bin(&["verify", "--seed", "3", "--q", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let reports: Vec<Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert!(reports.iter().all(|r| r["pass"] == true));
    let c = bin(&["verify", "--seed", "4", "--q", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn exit_code_two_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"pieces\": [{\"t0\": 1, \"t1\": 2, \"v\": 1}]}",
    );
    assert_eq!(bin(&["norm", "--input", &bad]).status.code(), Some(2));
    let garbage = write(dir.path(), "garbage.json", "not json");
    assert_eq!(bin(&["norm", "--input", &garbage]).status.code(), Some(2));
    let uneven = write(dir.path(), "uneven.csv", "x,value\n0,1\n1,1\n3,1\n");
    assert_eq!(bin(&["norm", "--input", &uneven]).status.code(), Some(2));
    assert_eq!(bin(&["norm"]).status.code(), Some(2));
    assert_eq!(
        bin(&["norm", "--alpha", "1", "--p1", "1"]).status.code(),
        Some(2)
    );
    let s1 = write(dir.path(), "s1.json", S1);
    assert_eq!(bin(&["best-approx", "--input", &s1]).status.code(), Some(2));
}
