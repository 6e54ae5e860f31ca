use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use hotspot::cli::run;
use hotspot::io::{format_trajectory, parse_trajectory};
use hotspot::oracle::verify_witness;
use hotspot::{Square, Window, Witness};

const T4_CSV: &str = "t,x,y\n0,0,0\n1,1,0\n2,3,0\n3,3,2\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn hotspot(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("hotspot").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn witness_of(rec: &Value) -> (Window, Witness) {
    let f = |v: &Value| v.as_f64().unwrap();
    let window = Window::new(f(&rec["window"][0]), f(&rec["window"][1])).unwrap();
    let square =
        Square { anchor_x: f(&rec["square"]["x"]), anchor_y: f(&rec["square"]["y"]), side: f(&rec["square"]["side"]) };
    let interval = Window::new(f(&rec["interval"][0]), f(&rec["interval"][1])).unwrap();
    (window, Witness { square, interval, score: f(&rec["score"]) })
}

#[test]
fn whole_trajectory_query() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let (code, out, err) = hotspot(&["query", "--input", p(&input), "--side", "2", "--whole"]);
    assert_eq!(code, 0, "{err}");
    let rec: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["score"], 2.0);
    assert_eq!(rec["interval"], serde_json::json!([1.0, 3.0]));
    let (w, wit) = witness_of(&rec);
    assert!(verify_witness(&parse_trajectory(T4_CSV).unwrap(), w, &wit));
}

#[test]
fn window_query() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let (code, out, _) = hotspot(&["query", "--input", p(&input), "--side", "2", "--window", "1.2", "1.8"]);
    assert_eq!(code, 0);
    let rec: Value = serde_json::from_str(out.trim()).unwrap();
    assert!((rec["score"].as_f64().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn query_batch_and_tsv() {
    let dir = TempDir::new().unwrap();
    let traj = parse_trajectory(T4_CSV).unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let queries = write(&dir, "q.txt", "# windows\n0 3\n0.5 3\n1.2 1.8\n-5 1.5\n\n2.5 2.5\n");
    let (code, out, _) = hotspot(&["query", "--input", p(&input), "--side", "2", "--queries", p(&queries)]);
    assert_eq!(code, 0);
    let recs: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 5);
    let scores: Vec<f64> = recs.iter().map(|r| r["score"].as_f64().unwrap()).collect();
    assert_eq!(scores[0], 2.0);
    assert_eq!(scores[1], 2.0);
    assert_eq!(scores[3], 1.5);
    assert_eq!(scores[4], 0.0);
    assert_eq!(recs[3]["window"], serde_json::json!([0.0, 1.5]));
    for rec in &recs {
        let (w, wit) = witness_of(rec);
        assert!(verify_witness(&traj, w, &wit), "{rec}");
    }

    let (code, out, _) =
        hotspot(&["query", "--input", p(&input), "--side", "2", "--queries", p(&queries), "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("window_start\twindow_end\tscore"));
    assert_eq!(lines[1].split('\t').nth(2), Some("2"));
}

#[test]
fn oracle_command() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let (code, out, _) = hotspot(&["oracle", "--input", p(&input), "--side", "2", "--window", "0", "3"]);
    assert_eq!(code, 0);
    let rec: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["vertex_anchored"]["score"], 2.0);
    assert!(rec["sampled"].as_f64().unwrap() <= 2.0 + 1e-9);
    assert_eq!(rec["samples"], 200);
}

#[test]
fn gen_then_query() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("walk.csv");
    let (code, out, _) = hotspot(&["gen", "--n", "500", "--seed", "3", "--out", p(&path)]);
    assert_eq!(code, 0);
    assert!(out.contains("500 vertices"));
    let text = std::fs::read_to_string(&path).unwrap();
    let traj = parse_trajectory(&text).unwrap();
    assert_eq!(traj.len(), 500);
    assert_eq!(format_trajectory(&traj), text);

    let (code, again, _) = hotspot(&["gen", "--n", "500", "--seed", "3", "--out", p(&dir.path().join("b.csv"))]);
    assert_eq!(code, 0);
    assert!(again.contains("500 vertices"));
    assert_eq!(std::fs::read_to_string(dir.path().join("b.csv")).unwrap(), text);

    let (code, out, _) = hotspot(&["query", "--input", p(&path), "--side", "3", "--window", "10", "200"]);
    assert_eq!(code, 0);
    let (w, wit) = witness_of(&serde_json::from_str(out.trim()).unwrap());
    assert!(verify_witness(&traj, w, &wit));
}

#[test]
fn bench_smoke() {
    let (code, out, err) = hotspot(&["bench", "--n", "2000", "--queries", "50", "--side", "4", "--seed", "1"]);
    assert_eq!(code, 0, "{err}");
    for key in ["build_ms", "query_median_us", "whole_score", "depth"] {
        assert!(out.contains(key), "missing {key} in {out}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let bad = write(&dir, "bad.csv", "t,x,y\n0,0,0\n0,1,1\n");

    let (code, out, _) = hotspot(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("query"));
    // usage problems
    assert_eq!(hotspot(&["query", "--input", p(&input), "--side", "2"]).0, 1);
    assert_eq!(hotspot(&["query", "--input", p(&input), "--side", "-1", "--whole"]).0, 1);
    assert_eq!(hotspot(&["query", "--input", p(&input), "--side", "2", "--window", "3", "1"]).0, 1);
    assert_eq!(hotspot(&["frobnicate"]).0, 1);
    // data problems
    let (code, _, err) = hotspot(&["query", "--input", p(&bad), "--side", "2", "--whole"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let missing = dir.path().join("missing.csv");
    assert_eq!(hotspot(&["query", "--input", p(&missing), "--side", "2", "--whole"]).0, 2);
}

#[test]
fn binary_runs() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.csv", T4_CSV);
    let ok = Command::new(env!("CARGO_BIN_EXE_hotspot"))
        .args(["query", "--input", p(&input), "--side", "2", "--whole"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"score\":2.0"));
    let bad = Command::new(env!("CARGO_BIN_EXE_hotspot")).args(["query", "--side", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
