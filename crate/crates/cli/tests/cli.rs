//! End-to-end tests of the binary: every subcommand, output fidelity,
//! determinism, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn otv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = otv(args);
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn discrete3(dir: &tempfile::TempDir) -> PathBuf {
    write_file(dir, "d3.json", r#"{"n": 3, "d": [[0,1,1],[1,0,1],[1,1,0]]}"#)
}

fn hamming(dir: &tempfile::TempDir) -> PathBuf {
    write_file(
        dir,
        "ham.json",
        r#"[[0,1,1,2],[1,0,2,1],[1,2,0,1],[2,1,1,0]]"#,
    )
}

fn hw_problem(dir: &tempfile::TempDir) -> PathBuf {
    write_file(
        dir,
        "hw.json",
        r#"{
            "n": 3,
            "d": [["0","1","1"],["1","0","1"],["1","1","0"]],
            "mu": ["1/2","1/7","5/14"],
            "model": {"type": "hardy_weinberg"},
            "engine": "exact"
        }"#,
    )
}

fn independence_problem(dir: &tempfile::TempDir) -> PathBuf {
    write_file(
        dir,
        "ind.json",
        r#"{
            "n": 4,
            "d": [[0,1,1,2],[1,0,2,1],[1,2,0,1],[2,1,1,0]],
            "mu": ["1/10","4/10","4/10","1/10"],
            "model": {"type": "independence_2x2"}
        }"#,
    )
}

#[test]
fn distance_values() {
    let dir = tempfile::tempdir().unwrap();
    let d3 = discrete3(&dir);
    let d3s = d3.to_str().unwrap();

    let out = stdout_of(&["distance", "--metric", d3s, "--mu", "1/3,1/3,1/3", "--nu", "1/3,1/3,1/3"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["distance"]["exact"]["a"], "0");

    let out = stdout_of(&[
        "distance", "--metric", d3s, "--mu", "1/2,1/7,5/14", "--nu", "1/2,5/14,1/7",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["distance"]["exact"]["a"], "3/14");

    let ham = hamming(&dir);
    let out = stdout_of(&[
        "distance", "--metric", ham.to_str().unwrap(), "--mu", "1,0,0,0", "--nu", "0,0,0,1",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["distance"]["exact"]["a"], "2");
    // all mass moves across the square: plan is the single entry (4, 1)
    assert_eq!(doc["plan"][0]["i"], 4);
    assert_eq!(doc["plan"][0]["j"], 1);
    assert_eq!(doc["plan"].as_array().unwrap().len(), 1);
}

#[test]
fn triangulate_formats() {
    let dir = tempfile::tempdir().unwrap();
    let d3 = discrete3(&dir);
    let ideal = stdout_of(&["triangulate", "--metric", d3.to_str().unwrap(), "--format", "ideal"]);
    let mut lines: Vec<&str> = ideal.lines().collect();
    assert_eq!(lines.len(), 6);
    lines.sort_unstable();
    assert!(lines.contains(&"<y12,y13,y31,y32>"));

    let trees = stdout_of(&["triangulate", "--metric", d3.to_str().unwrap(), "--format", "trees"]);
    assert_eq!(trees.lines().count(), 6);

    let d4 = write_file(
        &dir,
        "d4.json",
        r#"[[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]"#,
    );
    let cells = stdout_of(&["triangulate", "--metric", d4.to_str().unwrap(), "--format", "cells"]);
    assert_eq!(cells.lines().count(), 14);

    let cone = stdout_of(&["triangulate", "--metric", d3.to_str().unwrap(), "--format", "cone"]);
    assert!(cone.lines().any(|l| l == "d12 + d21 > d11 + d22"));
}

#[test]
fn model_distance_headline_document() {
    let dir = tempfile::tempdir().unwrap();
    let problem = hw_problem(&dir);
    let out = stdout_of(&["model-distance", problem.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();

    assert_eq!(doc["distance"]["exact"]["a"], "-8/7");
    assert_eq!(doc["distance"]["exact"]["b"], "1");
    assert_eq!(doc["distance"]["exact"]["c"], "2");
    let float = doc["distance"]["float"].as_f64().unwrap();
    assert!((float - 0.2713564195).abs() < 1e-9);

    assert_eq!(doc["theta_star"].as_array().unwrap().len(), 1);
    assert_eq!(doc["cells"].as_array().unwrap().len(), 6);
    assert_eq!(doc["triangulation_meta"]["simplices"], 6);
    assert_eq!(doc["triangulation_meta"]["perturbed"], false);
    // plan support: five tree entries
    assert_eq!(doc["plan"].as_array().unwrap().len(), 5);
}

#[test]
fn model_distance_two_minimizers_and_zero_law() {
    let dir = tempfile::tempdir().unwrap();
    let problem = independence_problem(&dir);
    let out = stdout_of(&["model-distance", problem.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let thetas = doc["theta_star"].as_array().unwrap();
    assert_eq!(thetas.len(), 2);
    let p0 = thetas[0][0]["float"].as_f64().unwrap();
    let q0 = thetas[0][1]["float"].as_f64().unwrap();
    let p1 = thetas[1][0]["float"].as_f64().unwrap();
    let q1 = thetas[1][1]["float"].as_f64().unwrap();
    assert!((p0 - q1).abs() < 1e-12 && (q0 - p1).abs() < 1e-12);
    assert_eq!(doc["triangulation_meta"]["perturbed"], true);

    // marginal on the model: distance zero
    let on_model = write_file(
        &dir,
        "on_model.json",
        r#"{
            "n": 3,
            "d": [[0,1,1],[1,0,1],[1,1,0]],
            "mu": ["1/4","1/2","1/4"],
            "model": {"type": "hardy_weinberg"}
        }"#,
    );
    let out = stdout_of(&["model-distance", on_model.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["distance"]["exact"]["a"], "0");
    assert_eq!(doc["distance"]["exact"]["b"], "0");
}

#[test]
fn outputs_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let problem = hw_problem(&dir);
    let first = stdout_of(&["model-distance", problem.to_str().unwrap()]);
    let second = stdout_of(&["model-distance", problem.to_str().unwrap()]);
    assert_eq!(first, second, "byte-identical reruns");

    // string-level rational fidelity through a parse
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    let reparsed: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, reparsed);
    assert_eq!(reparsed["distance"]["exact"]["a"].as_str().unwrap(), "-8/7");
}

#[test]
fn heatmap_rows_and_known_value() {
    let dir = tempfile::tempdir().unwrap();
    let problem = hw_problem(&dir);
    let out = stdout_of(&["heatmap", problem.to_str().unwrap(), "--grid", "101"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 102); // header + 101 rows
    assert_eq!(lines[0], "theta,w");
    // at p = 0 the image is (0, 0, 1) and the distance is 1 - 5/14 = 9/14
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert!((first[1].parse::<f64>().unwrap() - 9.0 / 14.0).abs() < 1e-12);

    // single-point grid sits at the domain midpoint
    let single = stdout_of(&["heatmap", problem.to_str().unwrap(), "--grid", "1"]);
    let lines: Vec<&str> = single.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!((lines[1].split(',').next().unwrap().parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn heatmap_grid_bounds_the_model_distance() {
    let dir = tempfile::tempdir().unwrap();
    let problem = independence_problem(&dir);
    let out = stdout_of(&["heatmap", problem.to_str().unwrap(), "--grid", "50"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2501); // header + 50*50 rows
    let min = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    let exact = 2.0 * (0.4f64).sqrt() - 1.0;
    assert!(min >= exact - 1e-12, "grid minimum {min} beats exact {exact}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // validation failure: malformed document
    let bad = write_file(&dir, "bad.json", r#"{"n": 3}"#);
    let out = otv(&["model-distance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // validation failure: asymmetric metric
    let asym = write_file(&dir, "asym.json", r#"[[0,1],[2,0]]"#);
    let out = otv(&["triangulate", "--metric", asym.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // capability: six states exceed the enumeration bound
    let d6 = write_file(
        &dir,
        "d6.json",
        r#"[[0,1,1,1,1,1],[1,0,1,1,1,1],[1,1,0,1,1,1],[1,1,1,0,1,1],[1,1,1,1,0,1],[1,1,1,1,1,0]]"#,
    );
    let out = otv(&["triangulate", "--metric", d6.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // capability: implicit curve model under model-distance
    let curve = write_file(
        &dir,
        "curve.json",
        r#"{
            "n": 3,
            "d": [[0,1,1],[1,0,1],[1,1,0]],
            "mu": ["1/3","1/3","1/3"],
            "model": {"type": "implicit_curve", "f": [
                {"coeff": "1", "exponents": [3,0,0]},
                {"coeff": "1", "exponents": [0,3,0]},
                {"coeff": "1", "exponents": [0,0,3]},
                {"coeff": "-4", "exponents": [1,1,1]}
            ]}
        }"#,
    );
    let out = otv(&["model-distance", curve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_format_lists_all_cells() {
    let dir = tempfile::tempdir().unwrap();
    let problem = hw_problem(&dir);
    let out = stdout_of(&["model-distance", problem.to_str().unwrap(), "--format", "table"]);
    assert!(out.contains("minimum value"));
    assert!(out.contains("distance: -8/7 + 1*sqrt(2)"));
    // 6 cell rows
    assert_eq!(out.lines().filter(|l| l.starts_with(char::is_numeric)).count(), 6);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let d3 = discrete3(&dir);
    let out_path = dir.path().join("result.json");
    let out = otv(&[
        "distance",
        "--metric",
        d3.to_str().unwrap(),
        "--mu",
        "1/3,1/3,1/3",
        "--nu",
        "1/2,1/4,1/4",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["distance"]["exact"]["a"], "1/6");
}
