use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn curve(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/curves").join(name)
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let tmp = std::env::temp_dir().join(format!("mwknot-cli-{}", std::process::id()));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mwknot"));
    cmd.args(args).env("MWKNOT_OUTPUT_DIR", &tmp);
    for var in ["MWKNOT_SEED", "MWKNOT_RETRIES", "MWKNOT_RASTER", "MWKNOT_BUDGET"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn cubic() -> String {
    curve("twisted_cubic.json").display().to_string()
}

#[test]
fn writhe_expect_mw_on_twisted_cubic() {
    let o = run(&["writhe", &cubic(), "--centers", "3", "--expect-mw"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["w"], 1);
    assert_eq!(v["exit_code"], 0);
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_curve_fails_the_gate() {
    let o = run(&["identify", &curve("bad_curve.json").display().to_string()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "input");
}

#[test]
fn missing_file_and_bad_point_are_input_errors() {
    assert_eq!(run(&["inspect", "/nonexistent.json"], &[]).status.code(), Some(2));
    let o = run(&["writhe", &cubic(), "--center", "1,2,x,4"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expect_mw_uses_absolute_writhe() {
    let k = mwknot::mwgen::twisted_cubic().mirror();
    let path = std::env::temp_dir().join(format!("mirror-{}.json", std::process::id()));
    std::fs::write(&path, k.to_json()).unwrap();
    let o = run(&["writhe", path.to_str().unwrap(), "--expect-mw"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["w"], -1);
    let o = run(&["writhe", curve("quartic_w1.json").to_str().unwrap(), "--centers", "2", "--expect-mw"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["w"], 1);
}

#[test]
fn config_precedence() {
    let o = run(&["inspect", &cubic()], &[("MWKNOT_SEED", "7"), ("MWKNOT_RASTER", "64")]);
    let c = &json(&o)["config"];
    assert_eq!(c["seed"], 7);
    assert_eq!(c["raster_resolution"], 64);
    assert_eq!(c["retry_budget"], 64);
    assert_eq!(c["invariant_budget"], 24);
    let o = run(&["inspect", &cubic(), "--seed", "9"], &[("MWKNOT_SEED", "7")]);
    assert_eq!(json(&o)["config"]["seed"], 9);
}

#[test]
fn zero_retries_rejected() {
    let o = run(&["writhe", &cubic(), "--retries", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["identify", &cubic(), "--seed", "3"];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["identify"]["verdict"], "CONSISTENT");
}

#[test]
fn classify_given_points() {
    let o = run(&["classify", &cubic(), "--point", "0,1,0,1", "--point", "0,1,0,-1"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("\"U1\"") && s.contains("\"U2\""));
}

#[test]
fn hyp_with_lines_on_twisted_cubic() {
    let o = run(&["hyp", &cubic(), "--lines", "--summary-only", "--raster", "64"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("winding"), "{s}");
}
