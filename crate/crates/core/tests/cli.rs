//! The command-line front end: output shape and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-dml"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn analyze_report_keys() {
    let out = run(&["analyze", &fixture("translation_p2.json"), "--nmax", "12", "--horizon", "1e5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["hits", "structure", "statuses", "orbit", "params", "error_bounds"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["hits"], serde_json::json!([0, 1, 5]));
    assert_eq!(v["structure"]["parith"][0], serde_json::json!({"type":"parith","a":"1/3","b":"-1/3","k":2,"p":2}));
}

#[test]
fn reduce_is_byte_identical_across_runs() {
    let args = ["reduce", &fixture("translation_p3.json")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["statuses"][0]["status"], "proved");
}

#[test]
fn exit_codes() {
    // unreadable file and malformed input are input errors
    assert_eq!(run(&["analyze", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    // the two-orbit decomposition is rejected
    assert_eq!(run(&["reduce", &fixture("three_factor_p3.json")]).status.code(), Some(1));
    // F-sets that disagree with V fail the cross-check
    let dir = std::env::temp_dir().join(format!("torus-dml-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inconsistent.json");
    std::fs::write(
        &path,
        r#"{"p":5,"N":2,"map":{"matrix":[[1,0],[0,1]],"translation":["t","t"]},"alpha":["1","1"],
            "variety":["x1 - x2"],"fsets":[{"type":"coset","r":["t","1"],"generators":[]}]}"#,
    )
    .unwrap();
    let out = run(&["reduce", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn iterate_and_member() {
    let f = fixture("translation_p2.json");
    let v = json(&run(&["iterate", &f, "--n", "2"]));
    assert_eq!(v["point"][0], "t^6");
    let v = json(&run(&["member", &f, "--n", "5"]));
    assert_eq!(v["hit"], true);
    let v = json(&run(&["member", &f, "--n", "21", "--modular"]));
    assert_eq!(v["outcome"]["hit"], true);
    let v = json(&run(&["member", &f, "--n", "22", "--modular"]));
    assert_eq!(v["outcome"]["hit"], false);
}

#[test]
fn seq_and_lrs_subcommands() {
    let v = json(&run(&["seq", "intersect", r#"{"type":"ap","m":8,"l":1}"#, r#"{"type":"parith","a":"1","b":"0","k":1,"p":3}"#]));
    assert_eq!(v["result"]["parith"][0], serde_json::json!({"type":"parith","a":"1","b":"0","k":2,"p":3}));
    let v = json(&run(&["lrs", "solve", r#"{"coeffs":["-1","-1"],"init":["0","1"]}"#, "--c", "1"]));
    assert_eq!(v["result"]["finite"], serde_json::json!([1, 2]));
    assert_eq!(v["status"], "proved");
    let v = json(&run(&["lrs", "solve", r#"{"coeffs":["1","-2"],"init":["0","1"]}"#, "--parith", "1/3,-1/3,2,2"]));
    assert_eq!(v["status"], "proved");
    assert_eq!(v["result"]["parith"][0]["a"], "1/3");
}
