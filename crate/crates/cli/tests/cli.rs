use std::process::{Command, Output};

use serde_json::Value;

fn exwf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exwf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("exactly one JSON document")
}

#[test]
fn least_singleton() {
    let o = exwf(&["least", "--a1", "x = 2", "--a0", "x = 3", "--start", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("μ = 2"));
}

#[test]
fn least_even_above_three() {
    let o = exwf(&[
        "least", "--a1", "2 divides x and x > 3", "--a0", "not (2 divides x and x > 3)", "--start", "22", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["mu"], 4);
    assert_eq!(doc["trace"]["visited"][0], "22");
}

#[test]
fn least_overlapping_sides() {
    let o = exwf(&["least", "--a1", "x > 5", "--a0", "x > 3", "--start", "7", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let doc = json(&o);
    assert_eq!(doc["error"], "disjointness-violated");
    assert_eq!(doc["witness"], 6);
    assert!(stderr(&o).contains('6'));
}

#[test]
fn least_reports_parse_errors() {
    let o = exwf(&["least", "--a1", "x >", "--start", "1", "--json"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(json(&o)["offset"], 3);
}

#[test]
fn least_start_outside_provers() {
    let o = exwf(&["least", "--a1", "x = 2", "--start", "5"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn prime_divisor_methods() {
    let o = exwf(&["prime-divisor", "12", "--method", "descent", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["p"], 2);

    let o = exwf(&["prime-divisor", "12", "--method", "clnp", "--json"]);
    let doc = json(&o);
    assert_eq!((doc["mu"].as_u64(), doc["p"].as_u64()), (Some(4), Some(2)));

    let o = exwf(&["prime-divisor", "91", "--json"]);
    let doc = json(&o);
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);

    let o = exwf(&["prime-divisor", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
}

#[test]
fn descent_countdown() {
    let o = exwf(&["descent", "--start", "5", "--found", "x = 0", "--descend", "x - 1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    let visited: Vec<&str> = doc["visited"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(visited, ["5", "4", "3", "2", "1", "0"]);
}

#[test]
fn descent_lex_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lex.json");
    std::fs::write(
        &path,
        r#"{"structure": {"lex": ["nat", "nat"]}, "start": "(2,3)",
            "found": ["(0,0)"], "descend": ["(a,b) if b > 0 => (a, b - 1)", "(a,0) => (a - 1, 2)"]}"#,
    )
    .unwrap();
    let o = exwf(&["descent", "--config", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["steps"], 10);
    assert_eq!(doc["visited"][4], "(1,2)");
    assert_eq!(doc["outcome"]["found"], "(0,0)");
}

#[test]
fn descent_increasing_step() {
    let o = exwf(&["descent", "--start", "5", "--found", "x = 0", "--descend", "x + 1"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("5 to 6"));

    let o = exwf(&["descent", "--start", "5", "--found", "x = 0", "--descend", "x + 1", "--json"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(json(&o)["outcome"].get("error").is_some());
}

#[test]
fn descent_rejects_ill_typed_start() {
    let o = exwf(&["descent", "--start", "(1,2)", "--found", "x = 0", "--descend", "x - 1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn check_suites() {
    let o = exwf(&["check", "axioms", "--bound", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let a = exwf(&["check", "properties", "--seed", "42", "--bound", "64", "--json"]);
    let b = exwf(&["check", "properties", "--seed", "42", "--bound", "64", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);

    let o = exwf(&["check", "axioms", "--bound", "8", "--mutant", "apart-is-equal", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc = json(&o);
    let failing = doc["checks"].as_array().unwrap().iter().find(|c| c["status"] == "fail").unwrap();
    assert!(failing["counterexample"].is_array());
}

#[test]
fn trace_out_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traces.jsonl");
    let o = exwf(&["prime-divisor", "30", "--trace-out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["visited"][0], "30");
}

#[test]
fn usage_errors() {
    assert_eq!(exwf(&["least", "--a1", "x = 1"]).status.code(), Some(64));
    assert_eq!(exwf(&["--bound", "0", "check"]).status.code(), Some(64));
    assert_eq!(exwf(&["--help"]).status.code(), Some(0));
}
