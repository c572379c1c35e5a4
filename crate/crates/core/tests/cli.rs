use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chudnovsky"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chudnovsky-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_curves_and_rejects_unknown_q() {
    let o = run(&["catalog", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("y^2 + y + 2x^3 + x + 1"));
    assert_eq!(run(&["catalog", "--q", "11"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--q", "6"]).status.code(), Some(2));
}

#[test]
fn bound_reports_json() {
    let o = run(&["bound", "--q", "3", "--n", "57", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 234);
    assert_eq!(v["degG"], 114);
    let o = run(&["bound", "--q", "2", "--n", "571", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 3566);
}

#[test]
fn bad_curve_is_a_validation_error() {
    let o = run(&["bound", "--q", "3", "--n", "10", "--curve", "y^2 = x^3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["places", "--q", "2", "--curve", "not a curve"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_verify_emit_round_trip() {
    let bundle = tmp("b.json");
    let slp = tmp("b.slp");
    let o = run(&["build", "--q", "3", "--n", "5", "--seed", "4", "--out", bundle.to_str().unwrap(), "--slp", slp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["verify", "--bundle", bundle.to_str().unwrap()]).status.code(), Some(0));
    let emitted = run(&["emit", "--bundle", bundle.to_str().unwrap()]);
    assert_eq!(emitted.status.code(), Some(0));
    assert_eq!(stdout(&emitted), std::fs::read_to_string(&slp).unwrap());
    assert!(stdout(&emitted).starts_with("# slp q=3 n=5"));
}

#[test]
fn tampered_bundle_fails_verification() {
    let bundle = tmp("t.json");
    assert_eq!(run(&["build", "--q", "2", "--n", "7", "--out", bundle.to_str().unwrap()]).status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    let w = v["products"][0]["w"].as_array_mut().unwrap();
    w[0] = serde_json::json!(1 - w[0].as_u64().unwrap());
    let bad = tmp("tampered.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["verify", "--bundle", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(4));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], false);
    assert!(r["witness"].is_object());

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["verify", "--bundle", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn repeated_builds_are_byte_identical() {
    let args = ["build", "--q", "2", "--n", "9", "--seed", "1"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["build", "--q", "2", "--n", "9", "--seed", "2"]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn shape_below_construction_range_fails() {
    let o = run(&["build", "--q", "2", "--n", "3"]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)), "{:?}", o.status);
}
