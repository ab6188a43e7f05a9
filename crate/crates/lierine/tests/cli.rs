//! End-to-end tests of the binary: committed golden outputs (reports must be
//! byte-identical run to run and release to release), the exit-code contract
//! (0 = verdicts pass, 1 = a verdict fails, 2 = diagnostics), and named
//! diagnostics for malformed inputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../manifests")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn golden(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("golden {path:?}: {e}"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lierine"))
        .args(args)
        .env_remove("LIERINE_MAX_RANK")
        .output()
        .expect("the CLI binary runs")
}

fn assert_matches_golden(args: &[&str], golden_name: &str, expected_code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(expected_code), "args: {args:?}");
    assert_eq!(
        out.stdout,
        golden(golden_name),
        "stdout diverged from {golden_name} for {args:?}"
    );
}

#[test]
fn check_report_matches_golden() {
    let m = manifest("line_bundle.json");
    assert_matches_golden(
        &["check", "--manifest", &m, "--json"],
        "check_line_bundle.json",
        0,
    );
}

#[test]
fn chern_report_matches_golden_in_both_formats() {
    let m = manifest("line_bundle.json");
    assert_matches_golden(&["chern", "line", "--manifest", &m, "--json"], "chern_line.json", 0);
    assert_matches_golden(&["chern", "line", "--manifest", &m], "chern_line.txt", 0);
}

#[test]
fn cohomology_reports_match_goldens() {
    let sl2 = manifest("sl2.json");
    assert_matches_golden(
        &["cohomology", "--regime", "finite", "--manifest", &sl2, "--json"],
        "cohomology_sl2.json",
        0,
    );
    let circle = manifest("truncated_circle.json");
    assert_matches_golden(
        &["cohomology", "--regime", "finite", "--manifest", &circle, "--json"],
        "cohomology_truncated_circle.json",
        0,
    );
}

#[test]
fn compare_report_matches_golden() {
    let m = manifest("line_bundle.json");
    assert_matches_golden(
        &["compare", "line", "line5", "--manifest", &m, "--json"],
        "compare_line_line5.json",
        0,
    );
}

#[test]
fn k0_report_matches_golden() {
    let m = manifest("line_bundle.json");
    assert_matches_golden(
        &["k0", "(line + line2) * line5", "--manifest", &m, "--json"],
        "k0_product.json",
        0,
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let m = manifest("line_bundle.json");
    let args = ["compare", "line", "line2", "--manifest", &m, "--json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
}

#[test]
fn broken_jacobi_fails_the_check_verdict() {
    let m = manifest("broken_jacobi.json");
    assert_matches_golden(
        &["check", "--manifest", &m, "--json"],
        "check_broken_jacobi.json",
        1,
    );
    // The failing triple is named in the report, 1-based.
    let out = run(&["check", "--manifest", &m, "--json"]);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failure = &parsed["results"]["axiom_failures"]["jacobi_failures"][0];
    assert_eq!(failure["i"], 1);
    assert_eq!(failure["j"], 2);
    assert_eq!(failure["k"], 3);
}

#[test]
fn diagnostics_exit_with_code_two() {
    let m = manifest("line_bundle.json");

    // No manifest at all.
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // A manifest path that does not exist.
    let out = run(&["check", "--manifest", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));

    // An unknown module label.
    let out = run(&["chern", "nosuch", "--manifest", &m]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));

    // A regime the ring cannot support: ℚ[x,y] is not finite-dimensional.
    let out = run(&["cohomology", "--regime", "finite", "--manifest", &m]);
    assert_eq!(out.status.code(), Some(2));

    // A malformed regime string.
    let out = run(&["cohomology", "--regime", "bogus", "--manifest", &m]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rank_cap_from_the_environment_is_a_diagnostic() {
    let sl2 = manifest("sl2.json");
    let out = Command::new(env!("CARGO_BIN_EXE_lierine"))
        .args(["check", "--manifest", &sl2])
        .env("LIERINE_MAX_RANK", "2")
        .output()
        .expect("the CLI binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}
