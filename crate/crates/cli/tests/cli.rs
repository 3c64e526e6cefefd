use std::process::Command;

use multituran_cli::{dispatch, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("multituran").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_paths_in_turan_graph() {
    let (code, out, _) = run(&["count", "--host", "turan:2,5", "--patterns", "P5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "6");
    let v = run_json(&["count", "--host", "turan:2,5", "--patterns", "P5,C4"]);
    assert_eq!(v["counts"]["entries"], serde_json::json!(["6", "3"]));
    assert_eq!(v["counts"]["sum"], "9");
    assert_eq!(v["patterns"], serde_json::json!(["P5", "C4"]));
}

#[test]
fn count_colored_host() {
    let v = run_json(&["count", "--host", "k6packs:1", "--patterns", "K3,K2"]);
    assert_eq!(v["counts"]["entries"], serde_json::json!(["20", "1"]));
    // graph6 "C~" is K4; edges 01,02,03 get color 1 and the triangle 123 color 2.
    let v = run_json(&["count", "--host", "C~:111222", "--patterns", "K3,K2"]);
    assert_eq!(v["host"], "C~:111222");
    assert_eq!(v["counts"]["entries"], serde_json::json!(["0", "3"]));
    // A bare graph6 host is uncolored: every pattern is counted in the whole graph.
    let v = run_json(&["count", "--host", "C~", "--patterns", "K3,K2"]);
    assert_eq!(v["counts"]["entries"], serde_json::json!(["4", "6"]));
}

#[test]
fn turan_edge_number() {
    let (code, out, _) = run(&["extremal", "--n", "5", "--patterns", "K2", "--forbid", "K3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "6");
    let v = run_json(&["extremal", "--n", "5", "--patterns", "K2", "--forbid", "K3", "--no-cache"]);
    assert_eq!(v["value"], "6");
    assert_eq!(v["exact"], true);
    assert_eq!(v["problem"]["mode"], "monochrome");
    assert_eq!(v["cached"], false);
    for field in ["witness_graph", "witness_coloring", "graphs_enumerated", "colorings_explored", "elapsed"] {
        assert!(v.get(field).is_some(), "{field}");
    }
}

#[test]
fn colored_extremal_number() {
    let v = run_json(&["extremal", "--n", "6", "--patterns", "C4,K2", "--forbid", "F2", "--colored", "--k", "2", "--no-cache"]);
    assert_eq!(v["value"], "10");
    assert_eq!(v["problem"]["mode"], "colored");
    assert_eq!(v["witness_coloring"].as_array().unwrap().len(), 10);
    let (code, _, err) = run(&["extremal", "--n", "5", "--patterns", "K3,K2", "--forbid", "K4", "--colored", "--k", "3"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn usage_and_refusal_exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--host", "turan:2,5"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--host", "turan:2,5", "--patterns", "Q7"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--host", "not graph6", "--patterns", "K2"]).0, EXIT_USAGE);
    let (code, _, err) = run(&["extremal", "--n", "11", "--patterns", "K2", "--forbid", "K3"]);
    assert_eq!(code, EXIT_INFEASIBLE, "{err}");
    assert!(err.contains("2^55"), "{err}");
    assert_eq!(run(&["berge", "--n", "7", "--r", "3", "--forbid", "K3", "--no-cache"]).0, EXIT_INFEASIBLE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn construct_and_evaluate() {
    let v = run_json(&["construct", "--spec", "fnstar:9", "--patterns", "S4,Mt:2"]);
    assert_eq!(v["order"], 9);
    assert_eq!(v["edges"], 12);
    assert_eq!(v["counts"]["entries"], serde_json::json!(["56", "6"]));
    assert!(v["coloring"].is_string());
    let (code, out, _) = run(&["construct", "--spec", "turan:2,5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("5 vertices, 6 edges"));
}

#[test]
fn bipartite_scan_table() {
    let v = run_json(&["scan-bipartite", "--n", "6", "--patterns", "S3"]);
    assert_eq!(v["best_x"], 3);
    assert_eq!(v["value"], "18");
    assert_eq!(v["table"].as_array().unwrap().len(), 4);
    let (_, out, _) = run(&["scan-bipartite", "--n", "6", "--patterns", "S3"]);
    assert!(out.contains("best x = 3, value = 18"));
}

#[test]
fn berge_extremal_number() {
    let v = run_json(&["berge", "--n", "4", "--r", "3", "--forbid", "K3", "--no-cache"]);
    assert_eq!(v["value"], 2);
    assert_eq!(v["exact"], true);
    let witness: multituran_core::berge::Hypergraph = v["witness"].as_str().unwrap().parse().unwrap();
    assert_eq!(witness.len(), 2);
}

#[test]
fn symmetrize_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let v = run_json(&[
        "symmetrize",
        "--host",
        "Dhc",
        "--patterns",
        "K2,K3",
        "--m",
        "3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(v["objective_before"], 5);
    assert!(v["objective_after"].as_u64().unwrap() >= 6);
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count(), v["trace"].as_array().unwrap().len());
    for line in lines.lines() {
        let step: Value = serde_json::from_str(line).unwrap();
        assert!(step["after"].as_u64() >= step["before"].as_u64() || step["accepted"] == false);
    }
    let (code, _, _) = run(&["symmetrize", "--host", "C~", "--patterns", "K3,K2", "--m", "3"]);
    assert_eq!(code, EXIT_USAGE);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multituran"))
}

#[test]
fn binary_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["--json", "extremal", "--n", "6", "--patterns", "K3,K2", "--forbid", "K4", "--colored"];
    let first = binary().args(args).env("MULTITURAN_CACHE", &cache).output().unwrap();
    assert!(first.status.success());
    let second = binary().args(args).env("MULTITURAN_CACHE", &cache).output().unwrap();
    let a: Value = serde_json::from_slice(&first.stdout).unwrap();
    let b: Value = serde_json::from_slice(&second.stdout).unwrap();
    assert_eq!(a["cached"], false);
    assert_eq!(b["cached"], true);
    assert_eq!(a["value"], b["value"]);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
}

#[test]
fn binary_exit_codes() {
    let out = binary().args(["extremal", "--n", "12", "--patterns", "K2", "--forbid", "K3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INFEASIBLE));
    let out = binary().args(["extremal", "--n", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn verify_suite_reports_every_criterion() {
    let out = binary().args(["--json", "verify", "--suite", "paper"]).output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let criteria = report["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    let ids: Vec<u64> = criteria.iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    let passed = report["passed"].as_bool().unwrap();
    assert_eq!(out.status.success(), passed);
    assert_eq!(passed, criteria.iter().all(|c| c["passed"] == true));
    let table = binary().args(["verify", "--suite", "paper"]).output().unwrap();
    let text = String::from_utf8(table.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 11);
}
