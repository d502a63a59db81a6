//! The `oscrank` binary: exit codes, report shape and byte-identical output.

use std::process::{Command, Output};

use serde_json::{json, Value};

fn oscrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscrank")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn rank_reports_sorted_json() {
    let out = oscrank(&["rank", "--system", "multiorder:2", "--map", "shift-limit", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["rank"], json!({ "finite": 2 }));
    assert_eq!(v["command"], json!("rank"));
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["derive", "--system", "multiorder:3", "--map", "shift-limit", "--level", "1", "--steps"];
    assert_eq!(oscrank(&args).stdout, oscrank(&args).stdout);
}

#[test]
fn timings_are_opt_in() {
    let plain = json_of(&oscrank(&["rank", "--system", "dlo", "--map", "identity"]));
    assert!(plain.get("timings").is_none());
    let timed = json_of(&oscrank(&["rank", "--system", "dlo", "--map", "identity", "--timings"]));
    assert!(timed["timings"]["total_ms"].is_number());
}

#[test]
fn exit_codes() {
    assert_eq!(oscrank(&["rank", "--system", "nowhere", "--map", "identity"]).status.code(), Some(2));
    assert_eq!(oscrank(&["derive", "--system", "dlo", "--map", "identity", "--set", "[0"]).status.code(), Some(2));
    assert_eq!(oscrank(&["check", "--law", "everything"]).status.code(), Some(2));
    let capped = oscrank(&["rank", "--system", "multiorder:4", "--map", "shift-limit", "--level", "1", "--cap", "3"]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(json_of(&capped)["rank"], json!({ "capped": 3 }));
}

#[test]
fn check_small_grid_laws() {
    for law in ["conjugation", "br-le-cb", "factor"] {
        let out = oscrank(&["check", "--law", law, "--grid", "small"]);
        assert_eq!(out.status.code(), Some(0), "{law}");
        assert_eq!(json_of(&out)["passed"], json!(true));
    }
}

#[test]
fn finite_system_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.json");
    std::fs::write(&path, r#"{"points":["a","b","c"],"generators":[[["a","b","c"]]],"maps":{}}"#).unwrap();
    let spec = format!("finite:{}", path.display());
    let out = oscrank(&["rank", "--system", &spec, "--all", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["system_beta"], json!({ "finite": 0 }));
    assert_eq!(v["maps"].as_array().unwrap().len(), 3);
}

#[test]
fn threads_env_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_oscrank"))
        .env("OSCRANK_THREADS", "2")
        .args(["rank", "--system", "cyclic", "--all", "--level", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["system_beta"], json!({ "finite": 1 }));
}
