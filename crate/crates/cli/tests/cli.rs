use std::fs;

use assert_cmd::Command;
use serde_json::Value;

fn maxab() -> Command {
    Command::cargo_bin("maxab").expect("binary builds")
}

fn lines(out: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(out).lines().map(|l| serde_json::from_str(l).expect("stdout line is JSON")).collect()
}

const PAULI: &str = r#"{"family":"pu","n":2,"generators":[
    {"dim":2,"perm":[1,0],"phases":["0/1","0/1"]},
    {"dim":2,"perm":[0,1],"phases":["0/1","1/2"]}]}"#;

#[test]
fn enumerate_pu_6_has_four_chains() {
    let out = maxab().args(["enumerate", "--family", "pu", "--n", "6"]).output().unwrap();
    assert!(out.status.success());
    let seqs: Vec<Value> = lines(&out.stdout).into_iter().map(|v| v["seq"].clone()).collect();
    assert_eq!(seqs, vec![serde_json::json!([2]), serde_json::json!([3]), serde_json::json!([6]), serde_json::json!([])]);
}

#[test]
fn enumerate_is_deterministic_and_sorted() {
    let run = || maxab().args(["enumerate", "--family", "po", "--n", "6"]).output().unwrap().stdout;
    let a = run();
    assert_eq!(a, run());
    let text = String::from_utf8(a).unwrap();
    let l: Vec<&str> = text.lines().collect();
    let mut sorted = l.clone();
    sorted.sort();
    assert_eq!(l, sorted);
}

#[test]
fn msms_count_k2_s3_is_four() {
    let out = maxab().args(["msms", "count", "--k", "2", "--s", "3"]).output().unwrap();
    assert!(out.status.success());
    let l = lines(&out.stdout);
    assert_eq!(l[0], Value::from(4));
    assert_eq!(l.len(), 5);
    let tuples: u64 = l[1..].iter().map(|v| v["tuples"].as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(tuples, 10 * 10 * 10);
}

#[test]
fn classify_pauli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pauli.json");
    fs::write(&path, PAULI).unwrap();
    let out = maxab().args(["classify", "--in"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(first, r#"{"family":"pu","n":2,"seq":[2]}"#);
    let report: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(report["star"], Value::Bool(true));
    assert_eq!(report["method"], "exact-rational");
}

#[test]
fn classify_accepts_bare_generator_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.json");
    let v: Value = serde_json::from_str(PAULI).unwrap();
    fs::write(&path, v["generators"].to_string()).unwrap();
    let out = maxab().args(["classify", "--family", "pu", "--in"]).arg(&path).arg("--float").output().unwrap();
    assert!(out.status.success());
    let l = lines(&out.stdout);
    assert_eq!(l[0]["seq"], serde_json::json!([2]));
    assert_eq!(l[1]["method"], "floating");
}

#[test]
fn out_flag_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    let out = maxab().args(["enumerate", "--family", "pu", "--n", "4", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 4);
}

#[test]
fn weyl_of_an_invariant_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.json");
    fs::write(&path, r#"{"family":"pu","n":3,"seq":[3]}"#).unwrap();
    let out = maxab().args(["weyl", "--in"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert_eq!(lines(&out.stdout)[0]["total_order"], "24");
}

#[test]
fn verify_star_on_every_invariant() {
    let out = maxab().args(["verify-star", "--family", "twisted", "--n", "4"]).output().unwrap();
    assert!(out.status.success());
    for v in lines(&out.stdout) {
        assert_eq!(v["report"]["star"], Value::Bool(true));
    }
}

#[test]
fn lift_carries_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.json");
    fs::write(&path, r#"{"family":"twisted","n":2,"generators":[{"dim":2,"perm":[0,1],"phases":["0/1","0/1"],"conj":true}]}"#)
        .unwrap();
    let out = maxab().args(["lift", "--family", "twisted", "--in"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let v = &lines(&out.stdout)[0];
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    assert!(v["note"].is_string());
}

#[test]
fn validation_errors_exit_2_with_empty_stdout() {
    for args in [
        vec!["enumerate", "--family", "pu"],
        vec!["enumerate", "--family", "pu", "--n", "6", "--k", "1"],
        vec!["enumerate", "--family", "sp", "--n", "6"],
        vec!["enumerate", "--family", "pu", "--n", "6", "--bogus"],
        vec!["lift", "--family", "po"],
    ] {
        let out = maxab().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // X and a non-commuting diagonal
    fs::write(
        &path,
        r#"{"family":"pu","n":2,"generators":[{"dim":2,"perm":[1,0],"phases":["0/1","0/1"]},{"dim":2,"perm":[0,1],"phases":["0/1","1/4"]}]}"#,
    )
    .unwrap();
    let out = maxab().args(["classify", "--in"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn cap_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pauli.json");
    fs::write(&path, PAULI).unwrap();
    let out = maxab().args(["classify", "--cap", "2", "--in"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = maxab().env("MAXAB_CAP", "2").args(["classify", "--in"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_lines_are_json() {
    let out = maxab().arg("--schema").output().unwrap();
    assert!(out.status.success());
    let names: Vec<String> = lines(&out.stdout).iter().map(|v| v["name"].as_str().unwrap().to_string()).collect();
    for want in ["presentation", "class_invariant", "fixed_algebra_report", "weyl_description", "msms_class"] {
        assert!(names.iter().any(|n| n == want), "{want}");
    }
}
