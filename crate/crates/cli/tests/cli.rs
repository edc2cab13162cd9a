use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn perturb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perturb")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Value {
    let mut all = args.to_vec();
    let out = dir.to_str().unwrap();
    all.extend(["--out", out]);
    let o = perturb(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn quintic_regular_report() {
    let dir = tempfile::tempdir().unwrap();
    let v = run_in(dir.path(), &["quintic-regular", "--order", "3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["experiment"], "quintic-regular");
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["1", "1/5", "-1/25", "1/125"]));
    assert_eq!(v["results"]["residual_leading"]["text"], "21/3125 ε^5");
    let csv = fs::read_to_string(dir.path().join("coefficients.csv")).unwrap();
    assert!(csv.starts_with("k,coefficient,residual\n0,1,0\n1,1/5,0\n"));
}

#[test]
fn exact_rational_eps() {
    let dir = tempfile::tempdir().unwrap();
    let v = run_in(dir.path(), &["quintic-regular", "-n", "2", "--eps", "1", "--format", "json"]);
    assert_eq!(v["results"]["at_eps"]["z"], "29/25");
    assert!(!dir.path().join("coefficients.csv").exists());
}

#[test]
fn bessel_table_and_k_star() {
    let dir = tempfile::tempdir().unwrap();
    let v = run_in(dir.path(), &["bessel-truncation", "--x", "2.3"]);
    assert_eq!(v["results"]["k_star"]["plain"], 3);
    assert_eq!(v["results"]["k_star"]["trig"], 4);
    let mut r = csv::Reader::from_path(dir.path().join("table.csv")).unwrap();
    assert_eq!(r.headers().unwrap().iter().next(), Some("k"));
    let want = [0.165, 0.081, 0.055, 0.049, 0.054, 0.070];
    for (rec, w) in r.records().zip(want) {
        let plain: f64 = rec.unwrap()[2].parse().unwrap();
        assert!((plain - w).abs() < 1e-3);
    }
}

#[test]
fn morrison_summary() {
    let dir = tempfile::tempdir().unwrap();
    let v = run_in(dir.path(), &["morrison", "--eps", "0.1", "--a0", "1"]);
    assert!(v["results"]["audit"]["max_scaled"].as_f64().unwrap() < 1.0);
    let csv = fs::read_to_string(dir.path().join("residual.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2002);
    assert!(csv.starts_with("t,residual,scaled\n"));
}

#[test]
fn every_experiment_runs() {
    for e in [
        "quintic-regular",
        "quintic-system",
        "quintic-puiseux",
        "quintic-singular",
        "hyperasymptotic",
        "bessel-truncation",
        "duffing-regular",
        "duffing-lindstedt",
        "morrison",
        "dde",
    ] {
        let dir = tempfile::tempdir().unwrap();
        let v = run_in(dir.path(), &[e]);
        assert_eq!(v["experiment"], e);
    }
    for form in ["regular", "renorm", "modified"] {
        let dir = tempfile::tempdir().unwrap();
        let v = run_in(dir.path(), &["pendulum", "--form", form, "--grid", "200"]);
        assert_eq!(v["parameters"]["form"], form);
        assert_eq!(v["results"]["structured_backward_error"]["parameters"], serde_json::json!(["-15/16", "0", "3/4"]));
    }
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        run_in(dir.path(), &["quintic-singular"]);
    }
    for f in ["report.json", "singular_branch.csv", "deviation.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(perturb(&["--help"]).status.code(), Some(0));
    assert_eq!(perturb(&["no-such-experiment"]).status.code(), Some(1));
    assert_eq!(perturb(&[]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(perturb(&["quintic-regular", "--eps", "x/y", "--out", out]).status.code(), Some(1));
    assert_eq!(perturb(&["hyperasymptotic", "--order", "2", "--out", out]).status.code(), Some(1));
    let o = perturb(&["dde", "--order", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N >= 2"));
}
