use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn curveseg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveseg"))
        .args(args)
        .env_remove("CURVESEG_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn transpose(m: &Value) -> Vec<Vec<u64>> {
    let rows: Vec<Vec<u64>> = m
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect())
        .collect();
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

#[test]
fn nodal_cubic_report_matches_the_worked_example() {
    let v = json_of(&curveseg(&["y^2 - x^3 - x^2"]));
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["mode"], "float");
    assert_eq!(v["shear"]["value"], "0");
    assert_eq!(transpose(&v["L"]), vec![vec![0, 0, 1, 2, 1], vec![0, 0, 1, 0, 1]]);
    assert_eq!(transpose(&v["R"]), vec![vec![0, 2, 1, 2, 1], vec![0, 0, 1, 0, 1]]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    assert_eq!(v["components"], 1);
    let xs: Vec<&str> = v["partition"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["x"].as_str().unwrap())
        .collect();
    assert_eq!(xs, vec!["-2", "-1", "-1/2", "0", "1"]);
    assert_eq!(v["edges"][0], serde_json::json!([[1, 0], [2, 0]]));
}

#[test]
fn figure_eight_needs_no_shear() {
    let v = json_of(&curveseg(&["3*x^4 + 5*x^2*y^2 + 2*y^4 - 4*y^2"]));
    assert_eq!(v["shear"]["value"], "0");
    assert_eq!(v["components"], 1);
}

#[test]
fn vertical_line_has_its_own_exit_code() {
    let out = curveseg(&["x - 1"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("vertical line"));
}

#[test]
fn parse_errors_exit_with_code_three() {
    for bad in ["", "x^", "y^2 +", "2 x", "x**y", "1/0", "z", "x^2 $ y", "((x))", "ÿ"] {
        let out = curveseg(&[bad]);
        assert_eq!(out.status.code(), Some(3), "input {bad:?}");
        assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
    }
}

#[test]
fn usage_errors_are_reported_by_the_argument_parser() {
    assert_eq!(curveseg(&["y", "--epsilon", "abc"]).status.code(), Some(2));
    assert_eq!(curveseg(&["y", "--epsilon=0"]).status.code(), Some(9));
    assert_eq!(curveseg(&["y", "--x-range", "1,0"]).status.code(), Some(9));
    assert_eq!(curveseg(&["0"]).status.code(), Some(10));
}

#[test]
fn empty_curve() {
    let v = json_of(&curveseg(&["y^2 + x^2 + 1"]));
    assert!(v["fibers"].as_array().unwrap().iter().all(|f| f.as_array().unwrap().is_empty()));
    assert_eq!(v["components"], 0);
    assert!(v["edges"].as_array().unwrap().is_empty());
}

#[test]
fn circle_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let out = curveseg(&[
        "x^2 + y^2 - 1",
        "--json",
        p("c.json").to_str().unwrap(),
        "--dot",
        p("c.dot").to_str().unwrap(),
        "--svg",
        p("c.svg").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(p("c.dot")).unwrap();
    assert_eq!(dot.matches("[pos=").count(), 4);
    assert_eq!(dot.matches(" -- ").count(), 4);
    let svg = std::fs::read_to_string(p("c.svg")).unwrap();
    assert_eq!(svg.matches("<line").count(), 4);
    assert_eq!(svg.matches("fill=\"red\"").count(), 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p("c.json")).unwrap()).unwrap();
    assert_eq!(v["components"], 1);
}

fn outputs(dir: &Path, tag: &str, args: &[&str]) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let (j, d, s) = (
        dir.join(format!("{tag}.json")),
        dir.join(format!("{tag}.dot")),
        dir.join(format!("{tag}.svg")),
    );
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--json", j.to_str().unwrap(), "--dot", d.to_str().unwrap()]);
    all.extend(["--svg", s.to_str().unwrap()]);
    assert!(curveseg(&all).status.success());
    (
        std::fs::read(j).unwrap(),
        std::fs::read(d).unwrap(),
        std::fs::read(s).unwrap(),
    )
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["y^3 - 2*x*y + x^4 - 1/3", "--refine", "3"];
    assert_eq!(outputs(dir.path(), "a", &args), outputs(dir.path(), "b", &args));
    let cert = ["y^2 - x^3 - x^2", "--mode", "certified"];
    assert_eq!(outputs(dir.path(), "c", &cert), outputs(dir.path(), "d", &cert));
}

#[test]
fn environment_seed_overrides_the_flag() {
    // (y^2 - x^3 - x^2)((y - 3)^2 - x^3 - x^2): two nodes above x = 0, so
    // general position needs a random shear.
    let poly = "x^6 + 2*x^5 + x^4 - 2*x^3*y^2 + 6*x^3*y - 9*x^3 - 2*x^2*y^2 + 6*x^2*y \
                - 9*x^2 + y^4 - 6*y^3 + 9*y^2";
    let with_env = Command::new(env!("CARGO_BIN_EXE_curveseg"))
        .args([poly, "--seed", "1"])
        .env("CURVESEG_SEED", "5")
        .output()
        .unwrap();
    let flag = curveseg(&[poly, "--seed", "5"]);
    let a = json_of(&with_env);
    let b = json_of(&flag);
    assert_ne!(a["shear"]["value"], "0");
    assert_eq!(a, b);
}

#[test]
fn certified_mode_reports_ranges() {
    let v = json_of(&curveseg(&["y^2 - x^2 + 2", "--mode", "certified"]));
    assert_eq!(v["mode"], "certified");
    let crit: Vec<&Value> = v["partition"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["critical"] == true)
        .collect();
    assert_eq!(crit.len(), 2);
    assert!(crit.iter().all(|e| e["x"].is_array()));
    assert_eq!(v["components"], 2);
}

#[test]
fn counters_go_to_standard_error() {
    let out = curveseg(&["x^2 + y^2 - 1", "--counters"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("counters: ring_ops="));
    assert!(err.contains("graph_additions=8"));
}

#[test]
fn strip_and_refinement_flags() {
    let v = json_of(&curveseg(&["y^2 - x^3 - x^2", "--x-range", "-1/2,2", "--refine", "2"]));
    let xs: Vec<f64> = v["partition"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["approx"].as_f64().unwrap())
        .collect();
    assert_eq!(xs.first(), Some(&-0.5));
    assert_eq!(xs.last(), Some(&2.0));
    assert_eq!(xs.len(), 5);
    let out = curveseg(&["y^2 - x^3 - x^2", "--x-range", "-1,2"]);
    assert_eq!(out.status.code(), Some(9));
}

#[test]
fn conservation_only_mode_on_a_strict_curve() {
    let v = json_of(&curveseg(&["x^2 + y^2 - 1", "--no-derivative-test"]));
    assert_eq!(v["components"], 1);
    assert_eq!(v["counters"]["derivative_test_ops"], 0);
}

#[test]
fn discriminant_free_mode() {
    let v = json_of(&curveseg(&["y^2 - x^3 - x^2", "--no-discriminant", "--x-range", "-3,3"]));
    assert_eq!(v["components"], 1);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
}
