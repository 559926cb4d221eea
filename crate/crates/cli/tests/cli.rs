use std::process::{Command, Output};

use serde_json::Value;

fn drcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drcycle")).args(args).env_remove("DRCYCLE_THREADS").output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn error_of(o: &Output) -> Value {
    let first = String::from_utf8_lossy(&o.stderr).lines().next().unwrap().to_string();
    serde_json::from_str(&first).unwrap()
}

#[test]
fn stable_graphs_of_genus_two() {
    let o = drcycle(&["graphs", "2", "0", "--stable", "--max-edges", "3"]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v["result"].as_array().unwrap().len(), 7);
    assert_eq!(v["config"]["command"], "graphs");
    assert!(v["version"].is_string());
}

#[test]
fn genus_zero_codimension_zero_is_the_unit() {
    let o = drcycle(&["pixton", "0", "4", "1,2,-3,0", "0", "--mode", "moduli", "--k", "0", "--const"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let terms = json_out(&o)["result"]["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], "1");
    assert_eq!(terms[0]["graph"]["edges"].as_array().unwrap().len(), 0);
}

#[test]
fn vanishing_check_exit_codes() {
    let args = ["check", "vanishing", "--g", "0", "--n", "5", "--A", "2,-1,0,0,-1", "--c", "1"];
    let o = drcycle(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["result"]["verdict"], "pass");
    let mut neg = args.to_vec();
    neg.push("--negative-control");
    let o = drcycle(&neg);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json_out(&o)["result"]["witness"].is_null());
}

#[test]
fn truncated_invariance_exits_two() {
    let o = drcycle(&["check", "invariance", "--which", "I", "--g", "1", "--A", "1,-1", "--c", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["result"]["verdict"], "inconclusive-truncated");
}

#[test]
fn usage_errors_are_structured() {
    let o = drcycle(&["pixton", "1", "2", "1", "0"]);
    assert_eq!(o.status.code(), Some(64));
    let e = error_of(&o);
    assert_eq!(e["error"]["parameter"], "n");
    assert_eq!(e["error"]["kind"], "usage");

    let o = drcycle(&["dr", "1", "1,1"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(error_of(&o)["error"]["kind"], "invalid-input");

    let o = drcycle(&["check", "vanishing", "--g", "1", "--A", "1,-1", "--c", "1"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(error_of(&o)["error"]["parameter"], "c");

    let o = drcycle(&["pixton", "0", "3", "1,x,0", "0"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(error_of(&o)["error"]["kind"], "usage");
}

#[test]
fn dr_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dr.json");
    let p = path.to_str().unwrap();
    let o = drcycle(&["dr", "1", "0", "--output", p]);
    assert!(o.status.success());
    let o = drcycle(&["integrate", p]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["result"], "-1/24");

    let unit = dir.path().join("unit.json");
    let u = unit.to_str().unwrap();
    assert!(drcycle(&["pixton", "1", "1", "0", "0", "--output", u]).status.success());
    let o = drcycle(&["pair", p, u]);
    assert_eq!(json_out(&o)["result"], "-1/24");
}

#[test]
fn output_is_byte_stable() {
    let args = ["pixton", "1", "2", "1,-1", "1", "--poly"];
    let a = drcycle(&args);
    let b = drcycle(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"threads": 2, "max_edges": 1}"#).unwrap();
    let o = drcycle(&["--config", cfg.to_str().unwrap(), "graphs", "1", "1", "--stable"]);
    let v = json_out(&o);
    assert_eq!(v["config"]["threads"], 2);
    assert_eq!(v["config"]["truncation"]["max_edges"], 1);
    assert_eq!(v["result"].as_array().unwrap().len(), 2);

    let o = Command::new(env!("CARGO_BIN_EXE_drcycle")).args(["dr", "1", "0"]).env("DRCYCLE_THREADS", "3").output().unwrap();
    assert_eq!(json_out(&o)["config"]["threads"], 3);

    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    let o = drcycle(&["--config", cfg.to_str().unwrap(), "dr", "1", "0"]);
    assert_eq!(o.status.code(), Some(64));
}
