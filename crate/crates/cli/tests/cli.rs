use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lorentz-wishart"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["sample", "--m", "3", "--eta", "2.5", "--n", "100", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("sample mean"));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,w_1,w_2,w_3");
    assert_eq!(lines.len(), 101);
}

#[test]
fn sample_json_format() {
    let o = run(&["sample", "--eta", "2", "--sigma", r#"{"lambda": 2, "w": [1, 0]}"#, "--n", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[0]["w"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["sample", "--m", "3", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sample", "--m", "2", "--eta", "2", "--n", "10", "--sigma", r#"{"lambda": 1, "w": [2, 0]}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sigma not in Lorentz cone"));
    let o = run(&["sample", "--m", "3", "--eta", "2", "--n", "10", "--sigma", r#"{"lambda": 2, "w": [1, 0]}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sigma_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", r#"{"lambda": 2, "w": [1, 0, 0]}"#);
    let o = run(&["sample", "--eta", "3", "--sigma", &format!("@{s}"), "--n", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn t1_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "lambda,w_1,w_2,w_3,w_4\n2,0.5,0.3,0,0\n");
    let o = run(&["test-t1", "--m", "4", "--m0", "2", "--eta", "3", "--in", &f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["test"], "T1");
    assert_eq!(v["p_value"].as_f64(), Some(1.0));
    assert_eq!(v["statistic"].as_f64(), Some(0.0));
    assert_eq!(v["m"], 4);
    assert_eq!(v["m0"], 2);
    assert!(v["anomalies"].as_array().unwrap().is_empty());
    assert_eq!(v["mle"]["w"].as_array().unwrap().len(), 2);
}

#[test]
fn t2_identical_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "lambda,w_1,w_2\n2,0.3,-0.4\n2,0.3,-0.4\n");
    let o = run(&["test-t2", "--eta", "2", "--in", &f, "--n", "2000", "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["test"], "T2");
    assert!((v["lr"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["p_value"].as_f64(), Some(1.0));
}

#[test]
fn t2_needs_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "lambda,w_1\n2,0.3\n");
    let o = run(&["test-t2", "--eta", "2", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exactly 2"));
}

#[test]
fn bad_inputs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.csv", "lambda,w_1,w_2\n2,0.1,0.2\n2,oops,0.1\n");
    let o = run(&["test-t1", "--m0", "1", "--eta", "3", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let f = write(dir.path(), "out.csv", "lambda,w_1,w_2\n1,1,1\n");
    let o = run(&["test-t1", "--m0", "1", "--eta", "3", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not in Lorentz cone"));
    let f = write(dir.path(), "dim.csv", "lambda,w_1,w_2\n2,0.1,0.2\n");
    let o = run(&["test-t1", "--m", "3", "--m0", "1", "--eta", "3", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn density_at_unit_element() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.csv", "lambda,w_1,w_2\n1,0,0\n1,2,0\n");
    let o = run(&["density", "--m", "2", "--eta", "2", "--in", &f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "log_density,density");
    let v: f64 = rows[1].split(',').next().unwrap().parse().unwrap();
    assert!((v - (64.0 * (-4f64).exp() / std::f64::consts::PI).ln()).abs() < 1e-13);
    assert!(rows[2].starts_with("-inf,"));
}

#[test]
fn verify_suite_passes() {
    let o = run(&["verify", "--m", "4", "--m0", "2", "--eta", "3", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<Value> =
        String::from_utf8(o.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() >= 12);
    assert!(lines.iter().all(|r| r["passed"] == true));
    for key in ["name", "statistic", "threshold", "passed", "n_samples", "seed"] {
        assert!(lines[0].get(key).is_some(), "{key}");
    }
}
