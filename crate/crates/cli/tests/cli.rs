use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::NamedTempFile;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    exit: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn expsum(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_expsum")).args(args).output().unwrap();
    Run {
        exit: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn g_path() -> String {
    fixture("g.spec").display().to_string()
}

fn temp(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn exit_codes() {
    let g = g_path();
    let dup = temp(r#"{"n": 1, "terms": [{"coeff": 1, "exp": [1]}, {"coeff": 2, "exp": [1]}]}"#);
    let dup = dup.path().to_str().unwrap();
    let symbolic = temp(r#"{"n": 1, "terms": [{"coeff": "*", "exp": [1]}, {"coeff": 1, "exp": [-1]}]}"#);
    let symbolic = symbolic.path().to_str().unwrap();
    // a facet with a non-diagonal restriction: x + y + xy has the edge x + xy off the origin
    let skew = temp(r#"{"n": 2, "terms": [{"coeff": 1, "exp": [1, 0]}, {"coeff": 1, "exp": [0, 1]}, {"coeff": 1, "exp": [1, 1]}, {"coeff": 1, "exp": [2, 1]}]}"#);
    let skew = skew.path().to_str().unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["polytope", "--input", &g], 0),
        (&["hodge", "--input", &g], 0),
        (&["ordinary", "--input", &g, "--prime", "3"], 0),
        (&["conjecture", "--input", &g], 0),
        (&["lfunction", "--input", &g, "--prime", "3", "--kmax", "2"], 0),
        (&["ordinary", "--input", &g], 2),
        (&["ordinary", "--input", &g, "--prime", "4"], 2),
        (&["hodge"], 2),
        (&["hodge", "--input", "/nonexistent/g.spec"], 2),
        (&["polytope", "--input", dup], 2),
        (&["lfunction", "--input", symbolic, "--prime", "3"], 2),
        (&["lfunction", "--input", &g, "--prime", "101", "--kmax", "3"], 2),
        (&["hodge", "--input", &g, "--coeffs", "1,2"], 2),
        (&["frobnicate"], 2),
        (&["ordinary", "--input", skew, "--prime", "3"], 0),
    ];
    for (args, want) in cases {
        let run = expsum(args);
        assert_eq!(run.exit, *want, "{args:?}\nstdout: {}\nstderr: {}", run.stdout, run.stderr);
    }
}

#[test]
fn unsupported_input_reports_a_status() {
    let skew = temp(r#"{"n": 2, "terms": [{"coeff": 1, "exp": [1, 0]}, {"coeff": 1, "exp": [0, 1]}, {"coeff": 1, "exp": [1, 1]}, {"coeff": 1, "exp": [2, 1]}]}"#);
    let run = expsum(&["ordinary", "--input", skew.path().to_str().unwrap(), "--prime", "3", "--json"]);
    assert_eq!(run.exit, 0);
    assert_eq!(run.json()["status"], "unsupported");
}

#[test]
fn errors_have_a_record_in_json_mode() {
    let run = expsum(&["ordinary", "--input", &g_path(), "--json"]);
    assert_eq!(run.exit, 2);
    let v = run.json();
    assert_eq!(v["status"], "error");
    assert_eq!(v["exit"], 2);
    assert!(run.stderr.starts_with("error:"));
}

#[test]
fn records_round_trip_byte_for_byte() {
    let g = g_path();
    for args in [
        vec!["polytope", "--input", &g, "--json"],
        vec!["hodge", "--input", &g, "--json"],
        vec!["conjecture", "--input", &g, "--json"],
        vec!["lfunction", "--input", &g, "--prime", "3", "--kmax", "3", "--json"],
    ] {
        let run = expsum(&args);
        assert_eq!(run.exit, 0, "{args:?}: {}", run.stderr);
        let again = serde_json::to_string_pretty(&run.json()).unwrap() + "\n";
        assert_eq!(again, run.stdout, "{args:?}");
    }
}

#[test]
fn g_spec_document() {
    let input = expsum::input::read_input(&fixture("g.spec")).unwrap();
    assert_eq!(input.spec.n(), 5);
    assert_eq!(input.spec.terms().len(), 7);
}

#[test]
fn hodge_record_for_g() {
    let v = expsum(&["hodge", "--input", &g_path(), "--json"]).json();
    assert_eq!(v["hodge_numbers"], serde_json::json!([1, 2, 3, 2, 1, 0]));
    assert_eq!(v["weight_counts"], serde_json::json!([1, 7, 28, 82, 196, 406]));
    assert_eq!(v["degree"], 9);
    assert_eq!(v["denominator"], 1);
}

#[test]
fn conjecture_mismatch_at_five() {
    let run = expsum(&["conjecture", "--k", "5", "--input", &g_path(), "--json"]);
    let rows = run.json()["rows"].clone();
    assert_eq!(rows[0]["conjectured"], 7);
    assert_eq!(rows[0]["reference"], 6);
    assert_eq!(rows[0]["outcome"], "MISMATCH");
    let text = expsum(&["conjecture", "--k", "5", "--input", &g_path()]);
    assert!(text.stdout.contains("MISMATCH"), "{}", text.stdout);
}

#[test]
fn fast_lfunction_for_g() {
    let v = expsum(&["lfunction", "--input", &g_path(), "--prime", "3", "--fast", "--json"]).json();
    assert_eq!(v["route"], "kloosterman");
    assert_eq!(v["lstar_trivial_factors"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["newton_equals_hodge"], true);
    assert_eq!(v["family"]["trivial_factors"], serde_json::json!([0, 1]));
}

#[test]
fn fast_path_is_only_for_g() {
    let recip = temp(r#"{"n": 1, "terms": [{"coeff": 1, "exp": [1]}, {"coeff": 1, "exp": [-1]}]}"#);
    let path = recip.path().to_str().unwrap();
    let run = expsum(&["lfunction", "--input", path, "--prime", "5", "--fast"]);
    assert_eq!(run.exit, 2);
    assert!(run.stderr.contains("--fast"), "{}", run.stderr);
    let run = expsum(&["lfunction", "--input", path, "--prime", "5", "--json"]);
    assert_eq!(run.exit, 0, "{}", run.stderr);
    assert_eq!(run.json()["route"], "brute-force");
}

#[test]
fn verify_subcommand_passes() {
    let run = expsum(&["verify-paper", "--json"]);
    assert_eq!(run.exit, 0, "{}", run.stdout);
    let checks = run.json()["checks"].as_array().unwrap().clone();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn tampered_expectations_fail_with_a_diff() {
    let text = std::fs::read_to_string(fixture("paper-expected.record")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["weight_counts"][5] = 407.into();
    let tampered = temp(&serde_json::to_string(&v).unwrap());
    let run = expsum(&["verify-paper", "--kmax", "3", "--expected", tampered.path().to_str().unwrap()]);
    assert_eq!(run.exit, 1);
    assert!(run.stdout.contains("407"), "{}", run.stdout);
}

#[test]
fn over_budget_checks_are_skipped() {
    let run = expsum(&["verify-paper", "--prime", "5", "--json"]);
    assert_eq!(run.exit, 0, "{}", run.stdout);
    let checks = run.json()["checks"].as_array().unwrap().clone();
    let skipped: Vec<_> = checks.iter().filter(|c| c["status"] == "skipped").map(|c| c["id"].clone()).collect();
    assert!(!skipped.is_empty());
    assert!(checks.iter().all(|c| c["status"] != "fail"));
}
