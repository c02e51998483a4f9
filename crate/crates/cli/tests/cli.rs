//! End-to-end checks of the command-line interface: exit codes, report
//! determinism, and format handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn rankone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_exit_codes() {
    let ok = rankone(&["analyze", fixture("table1.slices").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    // analysis succeeds even when no completion exists
    let t4 = rankone(&["analyze", fixture("table4.slices").to_str().unwrap()]);
    assert_eq!(t4.status.code(), Some(0));
    let text = stdout_of(&t4);
    assert!(text.contains("real:    0 solutions"), "got: {text}");
    assert!(text.contains("complex: 2 solutions"), "got: {text}");

    let missing = rankone(&["analyze", "/nonexistent/input.slices"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.slices");
    std::fs::write(&empty, "* * | * *\n").unwrap();
    let out = rankone(&["analyze", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));

    let zero = dir.path().join("zero.slices");
    std::fs::write(&zero, "1 0\n").unwrap();
    let out = rankone(&["analyze", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // diagnostic names the offending index
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1,2,1)"));
}

#[test]
fn solve_no_solution_exits_3() {
    let out = rankone(&[
        "solve",
        fixture("table4.slices").to_str().unwrap(),
        "--field",
        "real",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no real rank-one completion"), "got: {err}");
    assert!(err.contains("sign system"), "got: {err}");
}

#[test]
fn fit_precondition_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = dir.path().join("sparse.json");
    std::fs::write(
        &sparse,
        r#"{"dims":[2,2,2],"entries":[{"index":[1,1,1],"mag":"1"}]}"#,
    )
    .unwrap();
    let out = rankone(&["fit", sparse.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("condition (A)"));
}

#[test]
fn oracle_cap_exits_5() {
    let out = Command::new(env!("CARGO_BIN_EXE_rankone"))
        .args(["oracle", fixture("table1.slices").to_str().unwrap()])
        .env("RANKONE_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn json_reports_are_byte_identical() {
    let run = || {
        stdout_of(&rankone(&[
            "analyze",
            fixture("table3.slices").to_str().unwrap(),
            "--json",
        ]))
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["pattern"]["condition_a"], serde_json::json!(true));
    assert_eq!(doc["real"]["count"], serde_json::json!(1));
    assert_eq!(doc["complex"]["count"], serde_json::json!(3));
    assert_eq!(
        doc["complex"]["divisors"],
        serde_json::json!([1, 1, 1, 1, 1, 1, 3])
    );
    assert_eq!(doc["provenance"]["mode"], serde_json::json!("exact"));
}

#[test]
fn generated_tensor_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let out = rankone(&[
        "generate",
        "--dims",
        "3,3,3",
        "--ones",
        "--pattern",
        "table5",
        "--amp",
        "0.2",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["entries"].as_array().unwrap().len(), 15);
    for e in doc["entries"].as_array().unwrap() {
        let mag = e["mag"].as_f64().unwrap();
        assert!(mag > 0.8 && mag < 1.2);
    }

    // determinism: the same seed writes the same file
    let path2 = dir.path().join("gen2.json");
    rankone(&[
        "generate",
        "--dims",
        "3,3,3",
        "--ones",
        "--pattern",
        "table5",
        "--amp",
        "0.2",
        "--seed",
        "7",
        "--out",
        path2.to_str().unwrap(),
    ]);
    assert_eq!(text, std::fs::read_to_string(&path2).unwrap());

    // the noisy tensor fits fine
    let fit = rankone(&["fit", path.to_str().unwrap()]);
    assert_eq!(fit.status.code(), Some(0));

    // excessive amplitude is rejected
    let bad = rankone(&[
        "generate", "--dims", "3,3,3", "--ones", "--pattern", "full", "--amp", "1.5",
    ]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn solve_limit_and_exact_output() {
    let out = rankone(&[
        "solve",
        fixture("table3.slices").to_str().unwrap(),
        "--limit",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("3 solutions"));
    assert!(text.contains("2 more not shown"));

    let exact = rankone(&[
        "solve",
        fixture("table2.slices").to_str().unwrap(),
        "--field",
        "real",
        "--exact",
    ]);
    assert_eq!(exact.status.code(), Some(0));

    let json = rankone(&[
        "solve",
        fixture("table3.slices").to_str().unwrap(),
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(doc["count"], serde_json::json!(3));
    assert_eq!(doc["solutions"]["kind"], serde_json::json!("finite"));
}

#[test]
fn slice_text_and_json_inputs_agree() {
    let slices = rankone(&[
        "analyze",
        fixture("table2.slices").to_str().unwrap(),
        "--json",
    ]);
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("table2.json");
    std::fs::write(
        &json_path,
        r#"{"dims":[3,3,3],"entries":[
            {"index":[1,1,1],"mag":"1","phase_turns":"0"},
            {"index":[1,2,1],"mag":"1","phase_turns":"0"},
            {"index":[1,1,2],"mag":"1","phase_turns":"0"},
            {"index":[1,3,3],"mag":"1","phase_turns":"0"},
            {"index":[2,1,1],"mag":"1","phase_turns":"0"},
            {"index":[3,3,1],"mag":"1","phase_turns":"0"},
            {"index":[3,1,3],"mag":"1","phase_turns":"0"}]}"#,
    )
    .unwrap();
    let json = rankone(&["analyze", json_path.to_str().unwrap(), "--json"]);
    let a: serde_json::Value = serde_json::from_str(&stdout_of(&slices)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(a["pattern"], b["pattern"]);
    assert_eq!(a["real"], b["real"]);
    assert_eq!(a["complex"], b["complex"]);
}
