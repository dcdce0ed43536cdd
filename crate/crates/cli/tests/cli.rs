use std::path::PathBuf;
use std::process::{Command, Output};

use fuzzydy_core::engine::replay;
use fuzzydy_core::protocols::{build_model, ProtocolConfig};
use fuzzydy_core::report::VerifyReport;
use serde_json::Value;

fn fuzzydy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzydy"))
        .args(args)
        .env_remove("FUZZYDY_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn safe_model_passes() {
    let out = fuzzydy(&["verify", "--model", "ns_fuzzy_auth_safe"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert!(v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn leaky_model_fails_with_its_invariant() {
    let out = fuzzydy(&["verify", "--model", "ns_fuzzy_conf"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["violated_invariant"], "Nb remains confidential from intruder");
    assert_eq!(v["trace"].as_array().unwrap().len(), 7);
}

#[test]
fn leak_switch_selects_the_variant() {
    let on = fuzzydy(&["verify", "--model", "nssk_safe", "--leak", "on"]);
    assert_eq!(on.status.code(), Some(1));
    assert_eq!(json(&on)["model"], "nssk_leaky");
    let off = fuzzydy(&["verify", "--model", "ns_fuzzy_auth", "--leak", "off"]);
    assert_eq!(off.status.code(), Some(0));
}

#[test]
fn unknown_model_is_a_usage_error() {
    let out = fuzzydy(&["verify", "--model", "nosuchmodel"]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nosuchmodel") && err.contains("ns_fuzzy_auth_safe"), "{err}");
    assert_eq!(fuzzydy(&["verify", "--model", "nssk_safe", "--bogus"]).status.code(), Some(64));
    assert_eq!(fuzzydy(&["verify", "--model", "nssk_safe", "--delta", "0.3"]).status.code(), Some(64));
}

#[test]
fn state_limit_is_inconclusive() {
    let out = fuzzydy(&["verify", "--model", "ns_fuzzy_auth", "--max-states", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["verdict"], "inconclusive");
    assert!(v["reason"].as_str().unwrap().contains("50"));
}

#[test]
fn reduct_on_duplicate_columns() {
    let out = fuzzydy(&["reduct", "--csv", &fixture("duplicate_columns.csv")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reduct_count"], 2);
    assert_eq!(v["reducts"], serde_json::json!([["v1"], ["v2"]]));
    assert_eq!(v["core"], serde_json::json!([]));
}

#[test]
fn reduct_on_the_synthetic_fixture() {
    let out = fuzzydy(&["reduct", "--csv", &fixture("synthetic_10x17.csv"), "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let oracle: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("synthetic_10x17.oracle.json")).unwrap()).unwrap();
    let v = json(&out);
    assert_eq!(v["reduct_count"], oracle["reduct_count"]);
    assert_eq!(v["core"], oracle["core"]);
}

#[test]
fn reduct_on_a_bundled_model() {
    let out = fuzzydy(&["reduct", "--model", "nsl_safe_fullctx"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["attributes"].as_array().unwrap().len(), 17);
    assert_eq!(v["objects"].as_array().unwrap().len(), 10);
    assert_eq!(v["core"], serde_json::json!(["resp_state", "resp_initiator"]));
    assert_eq!(v["pruned"].as_array().unwrap().len(), 4);
}

#[test]
fn csv_errors_report_their_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "object,a,b\nr1,1,x\n").unwrap();
    let out = fuzzydy(&["reduct", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("column 3"), "{err}");
}

#[test]
fn sweep_reports_stable_verdicts() {
    let out = fuzzydy(&["sweep", "--model", "nssk_leaky", "--precisions", "2,4", "--deltas", "0.01,0.0001"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_verdicts_equal"], true);
    assert_eq!(v["settings"].as_array().unwrap().len(), 4);
    let one = fuzzydy(&["sweep", "--model", "nssk_leaky", "--precisions", "2"]);
    assert_eq!(one.status.code(), Some(64));
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = fuzzydy(&["verify", "--model", "nssk_leaky", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("verdict: fail"));
    assert!(text.contains("intruder forges challenge response after leakage"));
}

#[test]
fn reported_traces_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = fuzzydy(&["verify", "--model", "ns_fuzzy_auth", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: VerifyReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let trace = report.to_trace().unwrap();
    let m = build_model("ns_fuzzy_auth", &ProtocolConfig::default()).unwrap();
    let end = replay(&m, &trace).unwrap();
    assert!(m.check_invariants(&end).contains(&"initiator correctly authenticated".to_string()));
}

#[test]
fn worker_variable_is_validated() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_fuzzydy"))
            .args(["verify", "--model", "nssk_safe"])
            .env("FUZZYDY_WORKERS", w)
            .output()
            .unwrap()
    };
    assert_eq!(run("zero").status.code(), Some(64));
    assert_eq!(run("0").status.code(), Some(64));
    let (a, b) = (json(&run("1")), json(&run("4")));
    assert_eq!(a["states"], b["states"]);
    assert_eq!(a["verdict"], b["verdict"]);
}

#[test]
fn list_prints_every_model() {
    let out = fuzzydy(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let names = String::from_utf8(out.stdout).unwrap();
    assert_eq!(names.lines().count(), 14);
    assert!(names.lines().any(|l| l == "woo_lam_leaky"));
}
