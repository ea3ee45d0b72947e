use std::process::{Command, Output};

use leja_logdet::sparse::load_matrix_market;
use leja_logdet::{gen_pentadiagonal, Csr, Report};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leja-logdet")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn json_report_round_trips() {
    let out = run(&["estimate", "--gen", "gmrf:12:-0.2", "--format", "json", "--deterministic", "--exact"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let report: Report = serde_json::from_value(value["report"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), value["report"]);
    assert_eq!(value["n"], 144);
    assert_eq!(value["config"]["reduction"], "sequential");
    assert_eq!(value["config"]["exact"], "exact-analytic");
    assert!(value["rel_error"].as_f64().unwrap() < 0.05);
    assert_eq!(report.estimate, report.n_log_sigma + report.trace_estimate);
}

#[test]
fn deterministic_runs_repeat_exactly() {
    let args = ["estimate", "--gen", "pentadiagonal:2000:3", "--format", "json", "--deterministic", "--seed", "9"];
    let a: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    assert_eq!(a["report"]["estimate"], b["report"]["estimate"]);
}

#[test]
fn csv_and_table_formats() {
    let out = run(&["estimate", "--gen", "pentadiagonal:500", "--method", "slq", "--format", "csv"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("method,n,nnz,estimate"));
    assert!(lines[1].starts_with("slq,500,"));

    let out = run(&["estimate", "--gen", "pentadiagonal:500", "--method", "exact-band"]);
    assert!(stdout(&out).contains("exact-band"));
}

#[test]
fn generated_file_estimates_like_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.mtx");
    let out = run(&["gen", "pentadiagonal:300:5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let q: Csr = load_matrix_market(&path).unwrap();
    assert_eq!(q, gen_pentadiagonal(300, 5).unwrap());

    let from_file = run(&["estimate", "--matrix", path.to_str().unwrap(), "--format", "json", "--deterministic"]);
    let from_gen = run(&["estimate", "--gen", "pentadiagonal:300:5", "--format", "json", "--deterministic"]);
    let a: Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&from_gen)).unwrap();
    assert_eq!(a["report"]["estimate"], b["report"]["estimate"]);
}

#[test]
fn errors_exit_with_one() {
    let out = run(&["estimate", "--matrix", "/nonexistent/file.mtx"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = run(&["estimate", "--gen", "pentadiagonal:50", "--s-val", "0.001"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["estimate", "--gen", "pentadiagonal:50", "--method", "exact-analytic"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn warnings_exit_with_two() {
    // A degree cap far below what the tolerance needs leaves the series unconverged.
    let out = run(&["estimate", "--gen", "gmrf:20:-0.24", "--max-degree", "3", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn likelihood_scan_csv() {
    let out = run(&["gmrf-likelihood", "--g", "12", "--grid-start", "-0.26", "--grid-stop", "-0.2", "--grid-step", "0.02"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,loglik,logdet_est,quadform");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("-0.26,-inf,-inf,"));

    let out = run(&["gmrf-likelihood", "--g", "100", "--grid-step", "0.04"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("theta,logdet_analytic"));
}

#[test]
fn bench_rows_and_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let out = run(&[
        "bench", "--sizes", "200,2", "--methods", "leja-hutchpp,exact-band", "--repetitions", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 4 + 1);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0..5], ["200", "200", "leja-hutchpp", "0", "0"]);
    assert!(!first[6].is_empty());
    let band: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(band[2], "exact-band");
    assert_eq!(band[7].parse::<f64>().unwrap(), 0.0);
    assert!(lines[5].starts_with("2,") && lines[5].contains("n >= 3"));
}

#[test]
fn leja_points_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.txt");
    assert!(run(&["leja", "--count", "64", "--out", path.to_str().unwrap()]).status.success());
    let pts: Vec<f64> = std::fs::read_to_string(&path).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(pts.len(), 64);
    assert!(pts.iter().all(|p| p.abs() <= 2.0));
    let stdout_pts = stdout(&run(&["leja", "--count", "64"]));
    assert_eq!(stdout_pts.lines().count(), 64);
}
