use std::path::PathBuf;
use std::process::{Command, Output};

use nblow_core::pipeline::Report;

fn nblow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nblow")).args(args).env_remove("NBLOW_HORIZON").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_report(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn eg1_verdict() {
    let o = nblow(&["example", "eg1", "--horizon", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json_report(&o);
    assert!(!r.verdict.right.closed);
    assert!(r.verdict.left.closed);
    assert_eq!(r.horizon, 10);
}

#[test]
fn eg3_has_two_fixed_points() {
    let o = nblow(&["example", "eg3", "--horizon", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json_report(&o);
    assert_eq!(r.closure.fixed_points, 2);
    assert!(!r.closure.same_limit);
}

#[test]
fn not_naive_reports_discrepancy() {
    let o = nblow(&["example", "not-naive", "--horizon", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("discrepancies"), "{out}");
    assert!(out.contains("B-stated: stated claim does not hold"), "{out}");
}

#[test]
fn json_output_round_trips() {
    let o = nblow(&["example", "eg2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let first: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let report: Report = serde_json::from_value(first.clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), first);
}

#[test]
fn horizon_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nblow"))
        .args(["example", "eg1", "--format", "json"])
        .env("NBLOW_HORIZON", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json_report(&o).horizon, 8);
}

#[test]
fn analyze_naive_seed_file() {
    let path = scratch("single-point.toml", "vars = 2\n[sequence]\nkind = \"naive\"\nseed.slots = { 0 = \"m\" }\n");
    let o = nblow(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json_report(&o);
    assert_eq!(r.horizon, 12);
    assert!(r.verdict.right.closed && r.verdict.left.closed);
    assert!(r.checks.is_empty());
}

#[test]
fn invalid_table_exits_2_with_witness() {
    let path = scratch(
        "bad-table.toml",
        r#"vars = 2
[sequence]
kind = "table"
[[sequence.terms]]
[[sequence.terms]]
slots = { 0 = "m" }
[[sequence.terms]]
slots = { 0 = "m^3" }
[[sequence.terms]]
slots = { 0 = "m^3" }
"#,
    );
    let o = nblow(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(m, n) = (1, 1)"), "{}", stderr(&o));
}

#[test]
fn parse_error_names_the_line() {
    let path = scratch("broken.toml", "vars = 2\n[sequence]\nkind = \n");
    let o = nblow(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn manifest_mismatch_exits_1() {
    let path = scratch(
        "wrong.toml",
        r#"vars = 2
[sequence]
kind = "naive"
seed.slots = { 0 = "m" }
[[expect]]
id = "wrong-verdict"
kind = "verdict"
right_closed = false
left_closed = true
"#,
    );
    let o = nblow(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mismatch: wrong-verdict"), "{}", stderr(&o));
}

#[test]
fn unknown_fixture_exits_2() {
    let o = nblow(&["example", "eg9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("available: eg1, eg2, eg3, not-naive"));
}

#[test]
fn sparse_squares_check() {
    let o = nblow(&["sparse", "check", "--set", "squares", "--bound", "4*m^2", "--horizon", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result       ok"));
}

#[test]
fn sparse_evens_fail() {
    let o = nblow(&[
        "sparse",
        "check",
        "--set",
        "arithmetic",
        "--step",
        "2",
        "--bound",
        "10*m",
        "--horizon",
        "1000",
        "--mmax",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sparse_shifted_list() {
    let o = nblow(&["sparse", "shifted", "--set", "list", "--members", "0,1,5,6,12", "--horizon", "20", "--d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[1, 6]");
}

#[test]
fn sparse_estimates_hold() {
    let o = nblow(&["sparse", "estimates", "--set", "powers", "--horizon", "1000", "--d", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ineq1_ok"], true);
    assert_eq!(v["ineq2_ok"], true);
}

#[test]
fn orbit_incidence_example() {
    let o = nblow(&[
        "orbit",
        "incidence",
        "--matrix",
        "1,0,0,0,2,0,0,0,3",
        "--point",
        "1,1,1",
        "--form",
        "x1-x0",
        "--horizon",
        "50",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["set"]["members"], serde_json::json!([0]));
}

#[test]
fn orbit_separate_auto() {
    let o = nblow(&["orbit", "separate", "--auto", "--delta", "1/2", "--nmax", "12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert_eq!(v["rows"][0]["degree"], 0);
    assert_eq!(v["translation_invariant"], true);
}

#[test]
fn orbit_points_collinear() {
    let o = nblow(&["orbit", "points", "--points", "1,0,0;1,1,0;1,2,0", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not separated"));
    let o = nblow(&["orbit", "points", "--points", "1,0,0;1,1,0", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn singular_matrix_is_input_error() {
    let o = nblow(&["orbit", "incidence", "--matrix", "1,2,2,4", "--point", "1,1", "--form", "x0", "--horizon", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = nblow(&["example", "eg3", "--format", "json"]);
    let b = nblow(&["example", "eg3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
