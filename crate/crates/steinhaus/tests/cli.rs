//! End-to-end tests of the binary: exit codes, file round trips and the
//! machine-readable output.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn steinhaus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinhaus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json_doc(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).expect("one JSON document")
}

fn write_zero_map(path: &Path) {
    let entries: Vec<Value> = (0..27).map(|_| serde_json::json!([0, 0, 0])).collect();
    let doc = serde_json::json!({ "m": 3, "entries": entries });
    std::fs::write(path, doc.to_string()).unwrap();
}

#[test]
fn fixture_roundtrip_through_verify_set() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("fixture.pts");
    let emit = steinhaus(&["fixture", "--emit", pts.to_str().unwrap()]);
    assert_eq!(emit.status.code(), Some(0));

    let verify = steinhaus(&["verify-set", pts.to_str().unwrap(), "--m", "3"]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("Valid"));
}

#[test]
fn fixture_map_verifies_valid() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("fixture.json");
    let emit = steinhaus(&["fixture", "--as-map", "--emit", map.to_str().unwrap()]);
    assert_eq!(emit.status.code(), Some(0));

    let verify = steinhaus(&["--json", "verify-map", map.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    let doc = json_doc(&verify);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["bruteforce_valid"], true);
    assert_eq!(doc["perms_valid"], true);
}

#[test]
fn zero_map_is_invalid_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("zero.json");
    write_zero_map(&map);

    let verify = steinhaus(&["--json", "verify-map", map.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
    let doc = json_doc(&verify);
    assert_eq!(doc["valid"], false);
    assert_eq!(doc["bruteforce_witness"]["x"], serde_json::json!([0, 0, 0]));
    assert_eq!(doc["bruteforce_witness"]["z"], serde_json::json!([1, 2, 2]));
    assert_eq!(doc["bruteforce_witness"]["squared_distance"], 1);
}

#[test]
fn verify_set_coverage_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("bad.pts");
    // two copies of the same coset, one coset absent
    let mut text = String::new();
    for _ in 0..27 {
        text.push_str("1/3 1/3 1/3\n");
    }
    std::fs::write(&pts, text).unwrap();
    let verify = steinhaus(&["verify-set", pts.to_str().unwrap(), "--m", "3"]);
    assert_eq!(verify.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_two() {
    let missing = steinhaus(&["verify-map", "/nonexistent/map.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"m\": 3}").unwrap();
    let parse = steinhaus(&["verify-map", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));

    let notprime = steinhaus(&["lambda", "--p", "9"]);
    assert_eq!(notprime.status.code(), Some(2));
}

#[test]
fn heuristic_matches_published_rows() {
    let out = steinhaus(&["heuristic", "--p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "7 1.0E2");

    let out = steinhaus(&["--json", "heuristic", "--range", "3:13"]);
    let doc = json_doc(&out);
    let rows = doc["rows"].as_array().unwrap();
    let display: Vec<&str> = rows.iter().map(|r| r["display"].as_str().unwrap()).collect();
    assert_eq!(display, vec!["1.4E15", "5.8E49", "1.0E2", "1.1E-1438", "4.0E-3748"]);
}

#[test]
fn lambda_conic_w_counts() {
    let out = steinhaus(&["--json", "lambda", "--p", "5"]);
    assert_eq!(json_doc(&out)["count"], 24);
    let out = steinhaus(&["--json", "conic", "--p", "5"]);
    assert_eq!(json_doc(&out)["count"], 6);
    let out = steinhaus(&["--json", "w", "--p", "5"]);
    assert_eq!(json_doc(&out)["count"], 6);
}

#[test]
fn search_linear_writes_valid_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("solution.json");
    let out = steinhaus(&[
        "--json",
        "search-linear",
        "--p",
        "3",
        "--samples",
        "2",
        "--out",
        map.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["rows"], 72);
    assert_eq!(doc["variables"], 81);
    assert_eq!(doc["consistent"], true);

    let verify = steinhaus(&["verify-map", map.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn search_csp_finds_and_reports_stats() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("found.json");
    let out = steinhaus(&[
        "--json",
        "search-csp",
        "--p",
        "3",
        "--max-nodes",
        "1000000",
        "--out",
        map.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["outcome"], "found");
    assert!(doc["stats"]["nodes"].as_u64().unwrap() > 0);

    let verify = steinhaus(&["verify-map", map.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn search_csp_infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let init = dir.path().join("bad_init.json");
    let mut entries = vec![Value::Null; 27];
    entries[0] = serde_json::json!([0, 0, 0]); // cell (0,0,0)
    entries[25] = serde_json::json!([0, 0, 0]); // cell (2,2,1)
    std::fs::write(
        &init,
        serde_json::json!({ "m": 3, "entries": entries }).to_string(),
    )
    .unwrap();
    let out = steinhaus(&[
        "--json",
        "search-csp",
        "--p",
        "3",
        "--initial",
        init.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_doc(&out);
    assert_eq!(doc["outcome"], "infeasible");
    assert_eq!(doc["stats"]["nodes"], 0);
}

#[test]
fn descent_subcommand() {
    let out = steinhaus(&["--json", "descent", "--n", "6", "--point", "7,2,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    let w: Vec<i64> = doc["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert_eq!(w.iter().map(|c| c * c).sum::<i64>(), 6);

    // unrepresentable: not-found semantics
    let out = steinhaus(&["descent", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));

    // off-sphere start: input error
    let out = steinhaus(&["descent", "--n", "6", "--point", "1,1,1,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn restrict_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("fixture.json");
    steinhaus(&["fixture", "--as-map", "--emit", map.to_str().unwrap()]);

    let out_path = dir.path().join("m1.json");
    let out = steinhaus(&[
        "restrict",
        map.to_str().unwrap(),
        "--m-prime",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["m"], 1);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 1);

    let out = steinhaus(&["restrict", map.to_str().unwrap(), "--m-prime", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pi_subcommand_matches_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("zero.json");
    write_zero_map(&map);
    let out = steinhaus(&[
        "--json",
        "pi",
        "--map",
        map.to_str().unwrap(),
        "--lambda",
        "2,2,1",
        "--x",
        "0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_doc(&out);
    assert_eq!(doc["values"], serde_json::json!([0, 0, 2]));
    assert_eq!(doc["is_permutation"], false);
    assert_eq!(doc["d"], 0);
}
