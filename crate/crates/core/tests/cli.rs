use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const RADEMACHER: &str = r#"{"type":"discrete","atoms":[-1,1],"probs":[0.5,0.5]}"#;

fn sqbias(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqbias")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn two_point(p: f64) -> String {
    let q = 1.0 - p;
    format!(r#"{{"type":"discrete","atoms":[{},{}],"probs":[{q},{p}]}}"#, -(p / q).sqrt(), (q / p).sqrt())
}

#[test]
fn transform_square_keeps_rademacher() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "rad.json", RADEMACHER);
    let out = sqbias(&["transform", s(&input), "--kind", "square"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let w: Value = serde_json::from_str(RADEMACHER).unwrap();
    assert_eq!(v["type"], "discrete");
    assert_eq!(v["atoms"].as_array().unwrap().iter().map(|x| x.as_f64()).collect::<Vec<_>>(), vec![Some(-1.0), Some(1.0)]);
    assert_eq!(v["probs"], serde_json::json!([0.5, 0.5]));
    assert_eq!(w["probs"], v["probs"]);
}

#[test]
fn transform_zero_gives_uniform_density_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "rad.json", RADEMACHER);
    let out_path = dir.path().join("zb.json");
    let out = sqbias(&["transform", s(&input), "--kind", "zero", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["type"], "density");
    assert_eq!(v["breakpoints"], serde_json::json!([-1.0, 1.0]));
    assert_eq!(v["coeffs"], serde_json::json!([[0.5, 0.0, 0.0]]));

    // the output re-parses and feeds the metric
    let m = sqbias(&["metric", s(&input), s(&out_path)]);
    assert_eq!(m.status.code(), Some(0));
    assert_eq!(stdout(&m).trim(), "0.5");
}

#[test]
fn transform_zero_rejects_nonzero_mean() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "shift.json", r#"{"type":"discrete","atoms":[0,2],"probs":[0.5,0.5]}"#);
    let out = sqbias(&["transform", s(&input), "--kind", "zero"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mean"));
}

#[test]
fn transform_all_kinds_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tp.json", &two_point(0.3));
    for kind in ["size", "zero", "square", "double-size", "uprod"] {
        let input = if kind == "size" || kind == "double-size" {
            write(&dir, "nn.json", r#"{"type":"discrete","atoms":[0.5,2,3],"probs":[0.2,0.5,0.3]}"#)
        } else {
            input.clone()
        };
        let out_path = dir.path().join(format!("{kind}.json"));
        let out = sqbias(&["transform", s(&input), "--kind", kind, "--out", s(&out_path)]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&out_path).unwrap();
        sqbias::Distribution::from_json(&text).unwrap_or_else(|e| panic!("{kind}: {e}"));
    }
}

#[test]
fn metric_outputs() {
    let dir = TempDir::new().unwrap();
    let rad = write(&dir, "rad.json", RADEMACHER);
    let out = sqbias(&["metric", s(&rad), s(&rad)]);
    assert_eq!(stdout(&out).trim(), "0");

    let tp = write(&dir, "tp.json", &two_point(0.1));
    let sq = dir.path().join("sq.json");
    assert_eq!(sqbias(&["transform", s(&tp), "--kind", "square", "--out", s(&sq)]).status.code(), Some(0));
    let out = sqbias(&["metric", s(&tp), s(&sq)]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 8.0 / 3.0).abs() < 1e-14, "{v}");

    let bad = write(&dir, "bad.json", "{");
    assert_eq!(sqbias(&["metric", s(&bad), s(&rad)]).status.code(), Some(2));
    assert_eq!(sqbias(&["metric", "/nonexistent/x.json", s(&rad)]).status.code(), Some(2));
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn bounds_rademacher_rows() {
    let dir = TempDir::new().unwrap();
    let rad = write(&dir, "rad.json", RADEMACHER);
    let out = sqbias(&["bounds", s(&rad), "--tmax", "3", "--steps", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["t", "r", "power", "eq9", "cor2", "g1", "cor1"]);
    assert_eq!(rows.len(), 31);
    assert!(rows[0].iter().all(|&v| v == 0.0), "{:?}", rows[0]);
    assert!((rows[30][0] - 3.0).abs() < 1e-15);
}

#[test]
fn bounds_two_point_corollary_against_once_integrated() {
    // The u^3/3 term puts the twice-integrated bound above the once-integrated
    // one for small t; it drops below past t ~ 0.27 for p = 0.02.
    let dir = TempDir::new().unwrap();
    let tp = write(&dir, "tp.json", &two_point(0.02));
    let out = sqbias(&["bounds", s(&tp), "--tmax", "1", "--steps", "20", "--cor2-outer"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header.last().unwrap(), "cor2_outer");
    let (eq9, cor2) = (3, 4);
    assert!(rows[1][cor2] > rows[1][eq9]);
    for row in &rows[6..=10] {
        assert!(row[cor2] < row[eq9], "t = {}", row[0]);
    }
    for row in &rows {
        assert!(row[7] >= row[cor2] - 1e-15);
    }
}

#[test]
fn bounds_requires_standardized_input() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "wide.json", r#"{"type":"discrete","atoms":[-2,2],"probs":[0.5,0.5]}"#);
    assert_eq!(sqbias(&["bounds", s(&p)]).status.code(), Some(2));
    let out = sqbias(&["bounds", s(&p), "--standardize", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parse_csv(&stdout(&out)).1.len(), 6);
}

#[test]
fn verify_theorem1() {
    let out = sqbias(&["verify", "--suite", "theorem1", "--seed", "42", "--count", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["suite"], "theorem1");
    assert_eq!(v["count"], 500);
    assert!(v["max_violation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_fixed_points_and_extremal() {
    let out = sqbias(&["verify", "--suite", "fixed-points"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["max_violation"], 0.0);

    let out = sqbias(&["verify", "--suite", "extremal", "--count", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["max_g"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_unknown_suite() {
    let out = sqbias(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "eq3", "--seed", "7", "--count", "40"];
    let a = sqbias(&args);
    let b = sqbias(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extremal_scan_small_grid() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("scan.json");
    let out = sqbias(&["extremal-scan", "--points", "6", "--sigma-samples", "5", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(v["max_g"].as_f64().unwrap() <= 1e-9);
    assert!(v["cells"].as_u64().unwrap() > 0);
    for k in ["x", "y", "z", "sigma2"] {
        assert!(v["argmax"][k].is_number());
    }

    let out = sqbias(&["extremal-scan", "--x", "-2", "-2", "--y", "-0.5", "-0.5", "--z", "1", "1", "--points", "1", "--sigma2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["max_g"].as_f64().unwrap() + 8.0 / 9.0).abs() < 1e-12);

    let out = sqbias(&["extremal-scan", "--x", "-2", "-2", "--y", "-0.5", "-0.5", "--z", "1", "1", "--points", "1", "--sigma2", "100"]);
    assert_eq!(out.status.code(), Some(2));
}
