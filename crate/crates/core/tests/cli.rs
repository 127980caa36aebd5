use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn polynum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn without_wall_time(mut v: Value) -> Value {
    v["meta"].as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn verify_twin_dragon() {
    let v = json_of(&polynum(&["verify", "--poly", "2,2,1", "--digits", "0,1"]));
    assert_eq!(v["result"]["verdict"], "yes");
    assert_eq!(v["meta"]["tool"], "polynum");
    assert!(v["meta"]["version"].is_string());
    assert!(v["meta"]["wall_time_ms"].is_u64());
    assert_eq!(v["meta"]["config"]["command"]["verify"]["system"]["poly"], "2,2,1");
}

#[test]
fn verify_reports_cycle_with_exit_zero() {
    let v = json_of(&polynum(&["verify", "--poly", "-2,1", "--digits", "0,1"]));
    assert_eq!(v["result"]["verdict"], "no");
    assert_eq!(v["result"]["witness_cycle"], serde_json::json!([[-1]]));
}

#[test]
fn symbolic_modulus_is_accepted() {
    let v = json_of(&polynum(&["verify", "--poly", "X^2+2*X+2"]));
    assert_eq!(v["result"]["verdict"], "yes");
}

#[test]
fn expand_six_in_base_minus_two() {
    let v = json_of(&polynum(&["expand", "--poly", "2,1", "--digits", "0,1", "--element", "6"]));
    assert_eq!(v["result"]["digits"], serde_json::json!([0, 1, 0, 1, 1]));
}

#[test]
fn stats_writes_report() {
    let path = scratch("report.json");
    let out = polynum(&[
        "stats", "--poly", "2,2,1", "--digits", "0,1", "--P", "Y^2", "--f", "sumdigits", "--T", "60",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["result"]["ks"].is_f64());
    assert_eq!(v["meta"]["config"]["command"]["stats"]["c"], 3.0);
    assert_eq!(v["meta"]["config"]["command"]["stats"]["bins"], 64);
}

#[test]
fn identical_runs_match_byte_for_byte() {
    let args = ["count", "--poly", "2,2,1", "--T", "40"];
    let a = json_of(&polynum(&args));
    let b = json_of(&polynum(&args));
    assert_eq!(
        without_wall_time(a).to_string(),
        without_wall_time(b).to_string()
    );

    let csv = |name: &str, workers: &str| {
        let path = scratch(name);
        let out = polynum(&[
            "--workers", workers, "--out", path.to_str().unwrap(),
            "enumerate", "--poly", "2,2,1", "--T", "25",
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let one = csv("enum1.csv", "1");
    let four = csv("enum4.csv", "4");
    assert_eq!(one, four);
    let text = String::from_utf8(one).unwrap();
    assert_eq!(text.lines().next(), Some("coeff_0,coeff_1"));
}

#[test]
fn stats_result_independent_of_workers() {
    let run = |w: &str| {
        let v = json_of(&polynum(&[
            "--workers", w, "stats", "--poly", "2,2,1", "--P", "Y^2", "--T", "30",
        ]));
        v["result"].to_string()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn tile_artifacts() {
    let image = scratch("tile.ppm");
    let points = scratch("tile.csv");
    let v = json_of(&polynum(&[
        "tile", "--poly", "2,2,1", "--depth", "10", "--size", "32",
        "--image", image.to_str().unwrap(), "--points", points.to_str().unwrap(),
    ]));
    assert!(v["result"]["area_estimate"].is_number());
    let ppm = std::fs::read(&image).unwrap();
    assert!(ppm.starts_with(b"P6\n"));
    let csv = std::fs::read_to_string(&points).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y"));
    assert_eq!(csv.lines().count(), 1 + 1024);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = polynum(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let last = String::from_utf8_lossy(&out.stderr);
    let line = last.lines().last().unwrap();
    let v: Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["kind"], "usage");
}

#[test]
fn missing_flag_is_usage_error() {
    assert_eq!(polynum(&["count", "--poly", "2,2,1"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_with_json_line() {
    // X−2 has the cycle −1 → −1
    let out = polynum(&["expand", "--poly", "-2,1", "--digits", "0,1", "--element", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let v: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(v["kind"], "domain");
    assert!(v["error"].as_str().unwrap().contains("cycle"));

    let out = polynum(&["verify", "--poly", "2,2,1", "--digits", "0,3"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["verdict"], "no");

    let out = polynum(&["stats", "--poly", "2,2,1", "--f", "zero", "--P", "Y^2", "--T", "60"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn help_exits_zero() {
    let out = polynum(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}
