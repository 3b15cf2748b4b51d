use std::path::Path;
use std::process::{Command, Output};

use findim_cli::io::{load, LoadOptions};
use findim_cli::report::revalidate;
use findim_cli::AnalysisReport;

fn findim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_findim")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(out: &Output) -> AnalysisReport {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn triangle_under_two_norms() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.csv", "0,0\n0,3\n4,0\n");
    let r = report(&findim(&["analyze", &f, "--metric", "l2", "--oracle"]));
    assert!((r.dim_fh.value.unwrap() - 2.0).abs() < 1e-8);
    let r = report(&findim(&["analyze", &f, "--metric", "linf"]));
    assert!(r.dim_fh.value.is_none());
    assert!(!r.summary.unwrap().focal.is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(dir.path(), "a.json", r#"{"matrix": [[0, 1, 2], [1, 0, 1], [2, 3, 0]]}"#);
    assert_eq!(findim(&["analyze", &asym]).status.code(), Some(2));
    let junk = write(dir.path(), "j.csv", "0,1\nx,2\n");
    assert_eq!(findim(&["analyze", &junk]).status.code(), Some(2));
    assert_eq!(findim(&["analyze", "/nonexistent/file.csv"]).status.code(), Some(2));

    let triangle = write(dir.path(), "tri.json", r#"{"matrix": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}"#);
    assert_eq!(findim(&["analyze", &triangle, "--strict-metric"]).status.code(), Some(2));

    let line: String = (0..40).map(|i| format!("{i}\n")).collect();
    let big = write(dir.path(), "big.csv", &line);
    assert_eq!(findim(&["analyze", &big, "--max-exact", "16"]).status.code(), Some(3));
    assert_eq!(findim(&["converge", "carpet", "9"]).status.code(), Some(3));
}

#[test]
fn reports_are_reproducible_and_witnesses_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let text = "0,0\n1,0\n2.5,0.5\n3,2\n0.5,2\n";
    let f = write(dir.path(), "p.csv", text);
    let a = findim(&["analyze", &f, "--no-timing", "--oracle"]);
    let b = findim(&["analyze", &f, "--no-timing", "--oracle"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert!(r.stats.wall_time_ms.is_none());
    revalidate(&r, &load(text, LoadOptions::default()).unwrap()).unwrap();
}

#[test]
fn generate_cantor_three() {
    let out = findim(&["generate", "cantor", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let xs: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(xs.len(), 8);
    assert_eq!(xs[0], 0.0);
    assert!((xs[7] - 26.0 / 27.0).abs() < 1e-15);
}

#[test]
fn converge_sierpinski() {
    let out = findim(&["converge", "sierpinski", "2..5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.len(), 12);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let limit = 3f64.ln() / 2f64.ln();
    let dims: Vec<f64> = rows.iter().map(|r| r[8].parse().unwrap()).collect();
    assert!(dims.windows(2).all(|w| w[0] < w[1] && w[1] < limit));
    assert!((rows[3][11].parse::<f64>().unwrap() - limit).abs() < 1e-15);
}

#[test]
fn transform_folds_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "linear4.csv", "0\n1\n2\n3\n");
    let out = findim(&["transform", "--r", "1", "--beta", "0.5", &f]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row0: Vec<f64> = v["matrix"][0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(row0, vec![0.0, 1.0, 2f64.sqrt(), 3f64.sqrt()]);

    let back = write(dir.path(), "folded.json", &String::from_utf8(out.stdout).unwrap());
    let r = report(&findim(&["analyze", &back]));
    assert!((r.dim_fh.value.unwrap() - 2.0 * 2f64.ln() / 3f64.ln()).abs() < 1e-8);
}
