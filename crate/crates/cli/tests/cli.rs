use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn osp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osp")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str) {
    let out = osp(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), golden(name), "output of {args:?} drifted from {name}");
}

#[test]
fn worked_examples_profile_matches_golden() {
    assert_golden(&["verify", "--profile", "paper-examples", "--format", "json"], "worked_examples.json");
    assert_golden(&["verify", "--profile", "paper-examples"], "worked_examples.txt");
}

#[test]
fn enumerate_golden_and_count() {
    let args = ["enumerate", "--g", "c", "--m", "2", "--lambda", "1", "--ell", "1", "--format", "json"];
    assert_golden(&args, "enumerate_c_2_1_1.json");
    let v: Value = serde_json::from_str(&stdout(&osp(&args))).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn enumerated_json_parses_back() {
    let out = osp(&["enumerate", "--g", "b", "--m", "2", "--n", "1", "--lambda", "1", "--ell", "2", "--degree", "3", "--format", "json"]);
    assert!(out.status.success());
    let ts: Vec<osp_core::osp::OspTableau> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!ts.is_empty());
    let a = osp_core::Alphabet::sup(2, 1);
    assert!(ts.iter().all(|t| t.is_valid(&a) && t.degree() <= 3));
}

#[test]
fn graph_dot_has_four_nodes() {
    let args = ["graph", "--g", "c", "--m", "2", "--lambda", "1", "--ell", "1", "--format", "dot"];
    assert_golden(&args, "graph_c_2_1_1.dot");
    let dot = stdout(&osp(&args));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 4);
    assert!(dot.lines().filter(|l| l.contains("->")).all(|l| l.contains("label=\"b")));
}

#[test]
fn graph_json_and_csv_agree() {
    let base = ["graph", "--g", "b", "--m", "2", "--lambda", "1", "--ell", "2"];
    let json: Value = serde_json::from_str(&stdout(&osp(&[&base[..], &["--format", "json"]].concat()))).unwrap();
    let csv = stdout(&osp(&[&base[..], &["--format", "csv"]].concat()));
    assert_eq!(json["edges"].as_array().unwrap().len(), csv.lines().count() - 1);
    assert_eq!(json["connectivity"]["sources"].as_array().unwrap().len(), 1);
}

#[test]
fn character_csv_golden() {
    assert_golden(
        &["character", "--g", "b", "--m", "1", "--n", "1", "--ell", "2", "--lambda", "1", "--degree", "3", "--format", "csv"],
        "character_b_1_1.csv",
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["graph", "--g", "c", "--m", "2", "--n", "1", "--lambda", "1", "--ell", "2", "--degree", "4", "--format", "json"];
    assert_eq!(stdout(&osp(&args)), stdout(&osp(&args)));
    let seeded = ["verify", "--profile", "signatures", "--seed", "7", "--format", "json"];
    assert_eq!(stdout(&osp(&seeded)), stdout(&osp(&seeded)));
}

#[test]
fn invalid_specs_exit_2() {
    for args in [
        &["enumerate", "--g", "c", "--m", "2", "--n", "1", "--lambda", "1"][..],
        &["enumerate", "--g", "x", "--m", "2"],
        &["enumerate", "--g", "b", "--m", "2", "--lambda", "2", "--ell", "1"],
        &["enumerate", "--g", "c", "--m", "0"],
        &["enumerate", "--g", "c", "--m", "1", "--lambda", "1,a"],
        &["kostka", "--g", "c", "--m", "1"],
        &["kn", "--g", "c", "--m", "2", "--n", "1"],
        &["enumerate", "--g", "c", "--m", "2", "--lambda", "1", "--format", "dot"],
    ] {
        assert_eq!(osp(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_1_with_report() {
    let out = osp(&["fock-check", "--g", "bb", "--m", "2", "--n", "1", "--degree", "3", "--serre", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn fock_suites_pass() {
    for args in [
        &["fock-check", "--g", "c", "--m", "2", "--n", "1", "--suite", "crystal-base"][..],
        &["fock-check", "--g", "b", "--m", "2", "--n", "1", "--serre"],
        &["fock-check", "--g", "d", "--m", "2", "--n", "1", "--suite", "algebra"],
        &["fock-check", "--g", "b", "--m", "1", "--n", "1", "--suite", "split"],
        &["fock-check", "--g", "bb", "--m", "2", "--n", "1", "--suite", "highest", "--a", "1"],
    ] {
        let out = osp(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn kn_reference_columns() {
    let c = osp(&["kn", "--g", "c", "--m", "5", "--left", "b5,b3,b2", "--right", "b4,b1", "--a", "1"]);
    assert_eq!(stdout(&c).trim(), "[2,5,b5,b2]");
    let b = osp(&["kn", "--g", "b", "--m", "5", "--left", "b5,b3,b1", "--right", "b5,b4,b1", "--a", "1"]);
    assert_eq!(stdout(&b).trim(), "[2,0,b5,b1]");
    let all = osp(&["kn", "--g", "c", "--m", "2", "--lambda", "1", "--ell", "2", "--format", "json"]);
    assert!(all.status.success());
    let v: Value = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(v["report"]["count"], v["report"]["oracle_dimension"]);
}

#[test]
fn every_profile_passes() {
    for p in ["signatures", "crystal", "characters", "kn"] {
        let out = osp(&["verify", "--profile", p]);
        assert_eq!(out.status.code(), Some(0), "{p}: {}", stdout(&out));
    }
}

#[test]
fn schur_expand_and_kostka() {
    let out = osp(&["schur-expand", "--g", "c", "--m", "2", "--n", "1", "--lambda", "1", "--ell", "1", "--degree", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["mismatches"].as_array().unwrap().is_empty());
    let k = stdout(&osp(&["kostka", "--g", "c", "--m", "1", "--ell", "1", "--degree", "2", "--format", "csv"]));
    assert_eq!(k, "mu,count\n\"\",1\n\"2\",1\n");
}
