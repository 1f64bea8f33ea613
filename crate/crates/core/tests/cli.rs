use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(format!("{name}.toml"))
}

fn sigmaint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmaint")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sigmaint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const DEGENERATE: &str = r#"variables = ["x", "y", "z"]
h = ["x^2+y^2+z^2-1"]
g = "z"
mode = "intersect-mod2"
matrix = [["x", "0"], ["y", "1"], ["z", "0"]]
"#;

#[test]
fn reference_case_reports_value_and_exits_zero() {
    let p = problem("sphere-half-b");
    let out = sigmaint(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["value"], 1);
    assert_eq!(r["provenance"]["dim"], 50);
}

#[test]
fn output_is_byte_identical_across_runs_and_matches_out_file() {
    let p = problem("sphere-half-a");
    let out_path = std::env::temp_dir().join(format!("sigmaint-report-{}.json", std::process::id()));
    let a = sigmaint(&[p.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    let b = sigmaint(&[p.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&out_path).unwrap(), a.stdout);
    std::fs::remove_file(out_path).ok();
}

#[test]
fn failed_hypothesis_exits_two_with_a_report() {
    let p = scratch("degenerate.toml", DEGENERATE);
    let out = sigmaint(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["status"], "hypothesis_failed");
    assert_eq!(r["assumptions"]["j_plus_g_trivial"], false);
    assert!(r["value"].is_null());
}

#[test]
fn malformed_input_exits_three_with_a_position() {
    let p = scratch("malformed.toml", &DEGENERATE.replace("\"x\", \"0\"", "\"x^^2\", \"0\""));
    let out = sigmaint(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    let missing = sigmaint(&["/nonexistent/problem.toml"]);
    assert_eq!(missing.status.code(), Some(3));
    let p = problem("sphere-half-a");
    let bad_box = sigmaint(&[p.to_str().unwrap(), "--box", "1:-1"]);
    assert_eq!(bad_box.status.code(), Some(3));
}

#[test]
fn verify_detects_non_crosscap_singularities() {
    let p = problem("double-torus-f2-verify");
    let out = sigmaint(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["provenance"]["only_crosscaps"], "not_only_crosscaps");
}

#[test]
fn mode_and_seed_overrides_apply() {
    let p = problem("sphere-half-b");
    let out = sigmaint(&[p.to_str().unwrap(), "--mode", "oracle", "--seed", "3", "--seeds", "400"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["mode"], "oracle");
    assert_eq!(r["value"], 1);
    assert_eq!(r["inputs"]["seed"], 3);
}
