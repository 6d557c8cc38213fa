use std::process::{Command, Output};

use serde_json::Value;

fn loewy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loewy")).args(args).output().expect("spawn loewy")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn block(v: &Value, i: usize) -> &Value {
    &v["blocks"][i]
}

#[test]
fn analyze_symmetric_three() {
    let out = loewy(&["analyze", "--group", "S3", "--prime", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["order"], 6);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
    let b = block(&v, 0);
    assert_eq!((b["defect"].as_u64(), b["exponent_log"].as_u64(), b["loewy_length"].as_u64()), (Some(1), Some(1), Some(2)));
    let verdicts = b["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().all(|x| x["satisfied"] == true || x["classification"] == "conjecture"));
    assert!(verdicts.iter().any(|x| x["check"] == "okuyama" && x["applicable"] == true));
}

#[test]
fn analyze_extraspecial_whole_algebra() {
    let out = loewy(&["analyze", "--group", "ES+(3)", "--prime", "3", "--group-algebra-ll"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["group_algebra_ll"], 9);
    let b = block(&v, 0);
    assert_eq!(b["rho"], 7);
    assert_eq!(b["defect_group_algebra_ll"], 9);
}

#[test]
fn analyze_cyclic_four_attains_rho() {
    let v = stdout_json(&loewy(&["analyze", "--group", "C4", "--prime", "2"]));
    let b = block(&v, 0);
    assert_eq!(b["loewy_length"], 4);
    assert_eq!(b["rho"], 4);
}

#[test]
fn analyze_is_deterministic_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.json");
    let args = ["analyze", "--group", "D8", "--prime", "2", "--seed", "5"];
    let first = loewy(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(loewy(&with_out).status.success());
    assert_eq!(first.stdout, std::fs::read(&path).unwrap());
    assert_eq!(stdout_json(&first)["seed"], 5);
}

#[test]
fn splitting_field_cap_is_a_skip() {
    let out = loewy(&["analyze", "--group", "D38", "--prime", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["status"], "skip");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn bad_input_fails() {
    assert!(!loewy(&["analyze", "--group", "X5", "--prime", "2"]).status.success());
    assert!(!loewy(&["analyze", "--group", "S3", "--prime", "4"]).status.success());
    assert!(!loewy(&["rho", "3", "1", "6"]).status.success());
    assert!(!loewy(&["rho", "40", "40", "7"]).status.success());
}

#[test]
fn rho_values_and_table() {
    let one = loewy(&["rho", "3", "1", "5"]);
    assert_eq!(String::from_utf8_lossy(&one.stdout).trim(), "13");
    let table = loewy(&["rho", "2", "2", "2", "--table"]);
    let text = String::from_utf8_lossy(&table.stdout);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().skip(1).collect()).collect();
    assert_eq!(rows, vec![vec!["1", "1", "1"], vec!["1", "2", "2"], vec!["1", "3", "4"]]);
}

#[test]
fn corpus_then_conjecture_from_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let out_s = out.to_str().unwrap();
    let run = loewy(&["corpus", "--families", "", "--group", "S4", "--group", "Q8", "--out", out_s, "--quiet", "--csv"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stdout));
    for f in ["blocks.jsonl", "summary.json", "summary.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: Value = serde_json::from_slice(&std::fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["tasks"], 3);

    let again = loewy(&["corpus", "--families", "", "--group", "S4", "--group", "Q8", "--out", out_s, "--quiet", "--resume"]);
    assert!(again.status.success());

    let input = out.join("blocks.jsonl");
    let conj_dir = dir.path().join("conj");
    let conj = loewy(&["conjecture", "--input", input.to_str().unwrap(), "--out", conj_dir.to_str().unwrap()]);
    assert!(conj.status.success());
    let text = String::from_utf8_lossy(&conj.stdout);
    assert!(text.contains("S4"), "{text}");
    let report: Value = serde_json::from_slice(&std::fs::read(conj_dir.join("conjecture.json")).unwrap()).unwrap();
    assert_eq!(report["counterexamples"], 0);
}
