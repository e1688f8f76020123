use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn subflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subflat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const FIVE: &str = r#"{"dim":3,"points":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,1]],"query":[0.3,0.3,0.6]}"#;

#[test]
fn nearest_flat_close_to_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "five.json", FIVE);
    let v = json(&subflat(&["nearest-flat", &f, "--k", "2", "--epsilon", "0.1", "--check"]));
    assert_eq!(v["schema"], 1);
    let ratio = v["oracle"]["ratio"].as_f64().unwrap();
    assert!(ratio <= 1.1 + 1e-12, "ratio {ratio}");
}

#[test]
fn nearest_simplex_close_to_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "five.json", FIVE);
    let v = json(&subflat(&["nearest-simplex", &f, "--k", "3", "--epsilon", "0.1", "--check"]));
    let ratio = v["oracle"]["ratio"].as_f64().unwrap();
    assert!(ratio <= 1.1 + 1e-12, "ratio {ratio}");
}

#[test]
fn planted_degeneracy_is_found() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("deg.json").display().to_string();
    json(&subflat(&["gen", "uniform-cube", "--n", "30", "--dim", "2", "--seed", "4", "--plant", "collinear", "--out", &f]));
    let v = json(&subflat(&["degeneracy", &f, "--check"]));
    assert_eq!(v["positive"], true);
    assert_eq!(v["oracle"]["positive"], true);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json").display().to_string();
    json(&subflat(&["gen", "gaussian", "--n", "60", "--dim", "3", "--seed", "9", "--out", &f]));
    let run = || subflat(&["nearest-flat", &f, "--k", "2", "--epsilon", "0.2", "--seed", "3"]).stdout;
    assert_eq!(run(), run());
    let gen = || subflat(&["gen", "gaussian", "--n", "60", "--dim", "3", "--seed", "9"]).stdout;
    assert_eq!(gen(), gen());
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "five.json", FIVE);
    let plain = json(&subflat(&["nearest-flat", &f, "--k", "2"]));
    assert!(plain.get("wall_time_s").is_none());
    let timed = json(&subflat(&["--timing", "nearest-flat", &f, "--k", "2"]));
    assert!(timed["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv").display().to_string();
    let js = dir.path().join("p.json").display().to_string();
    json(&subflat(&["gen", "gaussian", "--n", "25", "--dim", "4", "--seed", "1", "--format", "csv", "--out", &csv]));
    json(&subflat(&["gen", "gaussian", "--n", "25", "--dim", "4", "--seed", "1", "--out", &js]));
    let from_json: Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let expected: Vec<Vec<f64>> = serde_json::from_value(from_json["points"].clone()).unwrap();
    assert_eq!(rows, expected);
}

#[test]
fn parse_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.csv", "x0,x1\n0,0\n1,zap\n");
    let out = subflat(&["degeneracy", &f]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3"));
}

#[test]
fn missing_query_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "q.csv", "x0,x1\n0,0\n1,0\n0,1\n");
    let out = subflat(&["nearest-flat", &f, "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&subflat(&["nearest-flat", &f, "--k", "2", "--query", "0.2,-0.1", "--check"]));
    assert!(v["oracle"]["ratio"].as_f64().unwrap() <= 1.1 + 1e-12);
}

#[test]
fn exact_hyperplane_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.json").display().to_string();
    json(&subflat(&["gen", "uniform-cube", "--n", "80", "--dim", "2", "--seed", "2", "--out", &f]));
    let v = json(&subflat(&["nearest-hyperplane", &f, "--check"]));
    assert_eq!(v["subset"], v["oracle"]["optimizers"][0]);
}

#[test]
fn bench_reports_a_slope() {
    let v = json(&subflat(&["bench", "--problem", "nearest-hyperplane", "--dim", "2", "--sizes", "50,100", "--trials", "1"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["slope"].is_number());
}
