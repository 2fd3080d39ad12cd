use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn sheafdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheafdual"))
        .args(args)
        .env_remove("SHEAFDUAL_DEGREE_CAP")
        .output()
        .expect("binary runs")
}

fn structured(cmd: &str, file: &str) -> (i32, Value) {
    let path = corpus(file);
    let out = sheafdual(&[cmd, path.to_str().unwrap(), "--format", "structured"]);
    let report = serde_json::from_slice(&out.stdout).expect("structured report");
    (out.status.code().unwrap(), report)
}

#[test]
fn sections_of_the_two_three_system() {
    let (code, r) = structured("sections", "etale-2-3.json");
    assert_eq!(code, 0);
    let level = &r["data"]["levels"][0];
    assert_eq!(level["order"], 6);
    assert_eq!(level["group"], serde_json::json!([6]));
    assert_eq!(level["sections"].as_array().unwrap().len(), 6);
}

#[test]
fn mayer_vietoris_on_the_c2_star_is_exact() {
    let (code, r) = structured("mv-check", "tree-c2-star.json");
    assert_eq!(code, 0);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["name"].as_str().unwrap().starts_with("exact/")));
    assert!(checks.iter().all(|c| c["holds"] == true));
    assert_eq!(r["data"]["terms"].as_array().unwrap().len(), 9);
}

#[test]
fn the_counterexample_fails_validation_with_a_witness() {
    let (code, r) = structured("validate", "sheaf-counterexample.json");
    assert_eq!(code, 1);
    assert_eq!(r["holds"], false);
    let failed: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.get("witness").is_some()));
    let sheaf = failed
        .iter()
        .find(|c| c["name"] == "sheaf_condition")
        .unwrap();
    assert_eq!(sheaf["witness"]["middle"]["exact"], false);
}

#[test]
fn checks_are_sorted_by_name() {
    let (_, r) = structured("duality-square", "etale-pulled-back.json");
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
}

#[test]
fn input_errors_name_the_field() {
    let path = corpus("group-bad-divisibility.json");
    let out = sheafdual(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance.factors"));

    let path = corpus("etale-undeclared-chain.json");
    let out = sheafdual(&["sections", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance.chain"));
}

#[test]
fn missing_file_and_bad_arguments_are_input_errors() {
    assert_eq!(
        sheafdual(&["validate", "/nonexistent/instance.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sheafdual(&["validate"]).status.code(), Some(2));
    assert_eq!(sheafdual(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sheafdual(&["--help"]).status.code(), Some(0));
}

#[test]
fn commands_reject_unsuited_kinds() {
    let path = corpus("group-z6.json");
    let out = sheafdual(&["mv-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degree_cap_comes_from_flag_or_environment() {
    let path = corpus("module-trivial-z2-c2.json");
    let run = |args: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sheafdual"));
        cmd.args(args).env_remove("SHEAFDUAL_DEGREE_CAP");
        if let Some(v) = env {
            cmd.env("SHEAFDUAL_DEGREE_CAP", v);
        }
        let out = cmd.output().unwrap();
        let r: Value = serde_json::from_slice(&out.stdout).unwrap();
        r["degree_cap"].as_u64().unwrap()
    };
    let base = [
        "cohomology",
        path.to_str().unwrap(),
        "--format",
        "structured",
    ];
    assert_eq!(run(&base, None), 2);
    assert_eq!(run(&base, Some("1")), 1);
    let mut flagged = base.to_vec();
    flagged.extend(["--degree-cap", "3"]);
    assert_eq!(run(&flagged, Some("1")), 3);
}

#[test]
fn timing_appears_only_on_request() {
    let path = corpus("group-2-4.json");
    let plain = sheafdual(&["dualize", path.to_str().unwrap(), "--format", "structured"]);
    let r: Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert!(r.get("timing_ms").is_none());
    let timed = sheafdual(&[
        "dualize",
        path.to_str().unwrap(),
        "--format",
        "structured",
        "--timing",
    ]);
    let r: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(r["timing_ms"].is_number());
}

#[test]
fn text_reports_are_deterministic() {
    let path = corpus("prosheaf-fold.json");
    let a = sheafdual(&["duality-square", path.to_str().unwrap(), "--seed", "7"]);
    let b = sheafdual(&["duality-square", path.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("sheafdual duality-square (prosheaf), seed 7"));
    assert!(text.contains("result: pass"));
}
