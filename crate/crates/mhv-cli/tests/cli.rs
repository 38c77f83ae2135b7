//! Black-box contract tests for the `mhv` binary: output shapes and exit
//! codes, exercised exactly as a user would.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mhv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhv"))
        .args(args)
        .env_remove("MHV_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn tmp_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn bracket_examples() {
    let out = mhv(&["bracket", "d[2]", "d[-2]"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "4*d[0] + 1/2*c\n");

    let out = mhv(&["bracket", "c", "d[5]"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "0\n");

    let out = mhv(&["bracket", "h[0]", "h[-1]"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "1/2*l\n");
}

#[test]
fn bracket_parse_error_exits_2() {
    let out = mhv(&["bracket", "d[2", "d[0]"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("parse error"));
    assert!(stderr(&out).contains("offset"));
}

#[test]
fn degree_outputs() {
    assert_eq!(stdout(&mhv(&["degree", "h[-1]"])), "-1\n");
    assert_eq!(stdout(&mhv(&["degree", "c"])), "0\n");
    assert_eq!(
        stdout(&mhv(&["degree", "d[1] + d[2]"])),
        "non-homogeneous\n"
    );
    assert_eq!(stdout(&mhv(&["degree", "0"])), "zero\n");
}

#[test]
fn window_configuration_is_validated() {
    let out = mhv(&[
        "--window",
        "7",
        "--interior",
        "5",
        "solve",
        "--codomain",
        "H",
        "--degree",
        "0",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("window"));
}

#[test]
fn solve_buffer_violation_exits_2() {
    // Degree 4 needs outer >= 5 + 4 + 2 = 11 > 10.
    let out = mhv(&["solve", "--codomain", "H", "--degree", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("window too small"));
}

#[test]
fn solve_degree_zero_reports_dims() {
    let out = mhv(&["solve", "--codomain", "H", "--degree", "0"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("space_dim = 2, inner_dim = 1, outer_dim = 1, stable = true"));
}

#[test]
fn h1_degree_minus_one_is_all_inner() {
    let out = mhv(&["h1", "--codomain", "H", "--degree", "-1"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("outer_dim = 0"));
}

#[test]
fn h1_json_contains_membership_verdicts() {
    let out = mhv(&["--format", "json", "h1", "--codomain", "H", "--degree", "0"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["d1_inner"]["member"], serde_json::json!(false));
    assert_eq!(value["d2_inner"]["member"], serde_json::json!(true));
}

#[test]
fn hom_vanishes_off_diagonal() {
    let out = mhv(&["hom", "--m", "3", "--n", "5"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("dim = 0"));
}

#[test]
fn verify_unknown_lemma_exits_2() {
    let out = mhv(&["verify", "--lemma", "nope"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_reports_expected_verdicts() {
    let out = mhv(&[
        "verify", "--lemma", "UU", "--lemma", "RR", "--lemma", "PP", "--lemma", "ZA",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for lemma in ["UU", "RR", "PP", "ZA"] {
        assert!(text.contains(lemma), "{lemma} listed");
    }
    assert_eq!(text.matches("verified").count(), 4);
}

#[test]
fn verify_discrepancies_flagged_but_exit_zero() {
    let out = mhv(&["verify", "--lemma", "PO"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("discrepancy"));
    assert!(stdout(&out).contains("flagged discrepancies: PO"));
}

#[test]
fn verify_writes_json_report() {
    let path = tmp_path("verify_report.json");
    let out = mhv(&["verify", "--lemma", "ZA", "--json", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let body = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(value["results"][0]["lemma"], serde_json::json!("ZA"));
    assert_eq!(
        value["results"][0]["verdict"],
        serde_json::json!("verified")
    );
}

#[test]
fn verify_json_write_failure_exits_4() {
    let out = mhv(&[
        "verify",
        "--lemma",
        "ZA",
        "--json",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn recover_fixture_round_trip() {
    let out = mhv(&[
        "recover",
        "--oracle",
        fixture("derivation_oracle.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("verdict: derivation"));
    assert!(stdout(&out).contains("lambda = 5"));
}

#[test]
fn recover_perturbed_fixture_exits_3() {
    // Tamper one recorded value; the verdict names a concrete witness.
    let body = std::fs::read_to_string(fixture("derivation_oracle.json")).unwrap();
    let mut oracle: serde_json::Value = serde_json::from_str(&body).unwrap();
    oracle["values"]["c"] = serde_json::json!({ "h": { "0": "1" } });
    let path = tmp_path("perturbed_oracle.json");
    std::fs::write(&path, serde_json::to_string(&oracle).unwrap()).unwrap();

    let out = mhv(&["recover", "--oracle", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    assert!(stdout(&out).contains("verdict: violation at c"));
}

#[test]
fn recover_malformed_oracle_exits_2() {
    let path = tmp_path("malformed_oracle.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = mhv(&["recover", "--oracle", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("malformed oracle"));
}

#[test]
fn recover_missing_file_exits_4() {
    let out = mhv(&["recover", "--oracle", "/no/such/file.json"]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn recover_bad_extraction_index_exits_2() {
    let out = mhv(&[
        "recover",
        "--oracle",
        fixture("derivation_oracle.json").to_str().unwrap(),
        "--t",
        "1",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn seed_env_fallback_matches_flag() {
    let flagged = Command::new(env!("CARGO_BIN_EXE_mhv"))
        .args([
            "--format", "json", "--seed", "99", "verify", "--lemma", "jacobi",
        ])
        .env_remove("MHV_SEED")
        .output()
        .unwrap();
    let env_seeded = Command::new(env!("CARGO_BIN_EXE_mhv"))
        .args(["--format", "json", "verify", "--lemma", "jacobi"])
        .env("MHV_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flagged.stdout, env_seeded.stdout);
}
