//! End-to-end runs of the dp4 binary.

use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn dp4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp4")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/analysis-report.v1.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, report: &Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn analyze_split_trivial() {
    let out = dp4(&["analyze", &corpus("split_trivial.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("SPLIT_TRIVIAL_BRAUER"), "{text}");
    assert!(text.contains("REDUCIBLE"));
}

#[test]
fn analyze_reports_validate_against_schema() {
    let v = validator();
    let out = dp4(&["--json", "analyze", &corpus("corpus.json")]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    for r in reports {
        assert_valid(&v, r);
    }
    let labels: Vec<&str> = reports.iter().map(|r| r["galois"]["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["REDUCIBLE", "REDUCIBLE", "F20", "D10", "REDUCIBLE"]);
    let single = json(&dp4(&["--json", "analyze", &corpus("pure_quintic.json"), "--class", "11111"]));
    assert_valid(&v, &single);
    assert_eq!(single["classification"]["kind"], "IRREDUCIBLE");
    assert!(single["bt_witness"].is_object());
}

#[test]
fn schema_rejects_a_broken_report() {
    let v = validator();
    let mut report = json(&dp4(&["--json", "analyze", &corpus("dihedral.json")]));
    report["galois"]["label"] = Value::from("Q8");
    assert!(!v.is_valid(&report));
}

#[test]
fn malformed_input_exits_one_with_position() {
    let out = dp4(&["analyze", &corpus("malformed.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: parse error at "), "{err}");
    let missing = dp4(&["analyze", "/nonexistent/pencil.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["--json", "analyze", &corpus("corpus.json") as &str],
        vec!["--json", "--seed", "7", "simulate", "--systems", "40", "--twist-steps", "200"],
        vec!["--json", "search", "--poly", "t^5 - 5*t + 12", "--delta", "-12*t", "--class", "221"],
    ] {
        let a = dp4(&args);
        let b = dp4(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn canon_prints_the_pure_quintic_model() {
    let out = dp4(&["canon", "--poly", "t^5 - 2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Q1 = 2*u0*u4 + 2*u1*u3 + u2^2"), "{text}");
    assert!(text.contains("Q2 = 2*u0*u3 + 2*u1*u2 + 2*u4^2"));
    assert!(text.contains("pencil identity: true"));
    let v = json(&dp4(&["--json", "canon", "--poly", "t^5 - 5*t^3 + 4*t", "--delta", "2", "--delta", "3", "--delta", "1", "--delta", "1", "--delta", "6"]));
    assert_eq!(v["roundtrip"]["ok"], true);
    assert_eq!(v["contains_lambda0"], false);
}

#[test]
fn kummer_model_and_curve() {
    let v = json(&dp4(&["--json", "kummer", "--poly", "t^5 - 2", "--b", "3"]));
    assert_eq!(v["kummer"]["equations"].as_array().unwrap().len(), 3);
    assert_eq!(v["lambda0"]["splits"], true);
    assert!(v["genus2"]["equation"].as_str().unwrap().starts_with("y^2"));
    let out = dp4(&["kummer", "--poly", "t^5 - 2", "--b", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let root = dp4(&["kummer", "--poly", "t^5 - 5*t^3 + 4*t", "--b", "1"]);
    assert_eq!(root.status.code(), Some(1));
}

#[test]
fn search_finds_the_dihedral_witness() {
    let v = json(&dp4(&["--json", "search", "--poly", "t^5 - 5*t + 12", "--delta", "-12*t", "--class", "2'2'1", "--class", "221"]));
    assert_eq!(v["witness"]["b"], "35228991");
    let primes: Vec<u64> = v["witness"]["primes"].as_array().unwrap().iter().map(|p| p["p"].as_u64().unwrap()).collect();
    assert_eq!(primes, [109, 107]);
    let short = dp4(&["--prime-bound", "50", "search", "--poly", "t^5 - 5*t + 12", "--delta", "-12*t", "--class", "221"]);
    assert_eq!(short.status.code(), Some(2));
    let inadmissible = dp4(&["search", "--poly", "t^5 - 5*t + 12", "--class", "5'"]);
    assert_eq!(inadmissible.status.code(), Some(1));
}

#[test]
fn local_certificates_for_a_definite_pencil() {
    let v = json(&dp4(&["--json", "local", &corpus("definite_diagonal.json")]));
    let certs = v["certificates"].as_array().unwrap();
    let real = certs.iter().find(|c| c["place"] == "Real").unwrap();
    assert_eq!(real["verdict"], "insoluble");
    assert_eq!(real["witness"]["kind"], "definite_member");
}

#[test]
fn simulate_passes_and_negative_control_fails() {
    let out = dp4(&["--json", "simulate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["duality"]["pass_rate"], 1.0);
    assert_eq!(v["twists"]["parity_pass_rate"], 1.0);
    assert_eq!(v["twists"]["bound_pass_rate"], 1.0);
    assert_eq!(v["reported_failures"], 0);
    assert_eq!(v["descent"]["trace"]["dims"], serde_json::json!([5, 3, 1]));
    assert_eq!(v["endgame"]["kernel_is_delta_hat_line"], true);
    let bad = json(&dp4(&["--json", "simulate", "--corrupt-lagrangian"]));
    assert!(bad["reported_failures"].as_u64().unwrap() > 0);
    let b = json(&dp4(&["--json", "simulate", "--mode", "b", "--systems", "10", "--twist-steps", "10"]));
    assert_eq!(b["descent"]["trace"]["dims"], serde_json::json!([7, 3]));
    assert_eq!(dp4(&["simulate", "--dims", "0,2"]).status.code(), Some(1));
}

#[test]
fn verify_lemmas_table() {
    let out = dp4(&["verify-lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for g in ["C5", "D10", "F20", "A5", "S5"] {
        assert!(text.lines().any(|l| l.starts_with(g) && l.trim_end().ends_with("true")), "{g}: {text}");
    }
    let v = json(&dp4(&["--json", "verify-lemmas"]));
    let r: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|x| x["r"].as_u64().unwrap()).collect();
    assert_eq!(r, [4, 2, 1, 1, 1]);
}
