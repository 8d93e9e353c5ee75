//! End-to-end tests of the binary: exit codes, formats, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sodkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cfg_arg(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn check_passes_on_good_configs() {
    for name in ["fig1.json", "toy2.json", "gl2_adjoint2.json", "quiver2loop.json"] {
        let out = run(&["check", "--config", &cfg_arg(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.ends_with("check: PASS\n"), "{name}: {text}");
    }
}

#[test]
fn check_fails_with_named_invariant() {
    let out = run(&["check", "--config", &cfg_arg("bad_delta.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("delta Weyl-invariance: FAIL"));

    let out = run(&["check", "--config", &cfg_arg("bad_q.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("positive definite"));
}

#[test]
fn parse_errors_exit_two() {
    let out = run(&["check", "--config", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn locate_prints_the_cell() {
    let out = run(&[
        "locate",
        "--config",
        &cfg_arg("fig1.json"),
        "--weight",
        "3,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("raw lambda = (-8/5, 4/5)"));
    assert!(text.contains("norm_sq = 16/5"));
}

#[test]
fn enumerate_csv_has_expected_rows() {
    let out = run(&[
        "enumerate",
        "--config",
        &cfg_arg("toy2.json"),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,norm_sq,delta_lambda,central_weight,n_dominant,points"
    );
    assert_eq!(text.lines().count(), 6); // header + 5 summands
    assert!(text.contains("(0),0,(0),(),3,(-1); (0); (1)"));
}

#[test]
fn svg_needs_rank_two() {
    let out = run(&[
        "enumerate",
        "--config",
        &cfg_arg("fig1.json"),
        "--format",
        "svg",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("<polygon"));
    assert!(text.ends_with("</svg>\n"));

    let out = run(&[
        "enumerate",
        "--config",
        &cfg_arg("toy2.json"),
        "--format",
        "svg",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# SVG output needs rank 2"));
}

#[test]
fn verify_passes_and_reports() {
    let out = run(&["verify", "--config", &cfg_arg("gl2_adjoint2.json"), "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verification: PASS"));
    assert!(text.contains("semiorthogonality"));
    assert!(text.contains("full-faithfulness"));
}

#[test]
fn quiver_table_matches_closed_form_row() {
    let out = run(&["quiver", "--config", &cfg_arg("quiver2loop.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("key=2 partition=(1;-1) + (1;1) labels=(-3/2) (3/2)"));
}

#[test]
fn levis_table_lists_all_subsets() {
    let out = run(&[
        "levis",
        "--config",
        &cfg_arg("gl2_adjoint2.json"),
        "--weight",
        "1,-1",
        "--kappa",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("levi {}:"));
    assert!(text.contains("levi {0}:"));
    assert!(text.contains("label (kappa=2): (-2, 2)"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = run(&[
        "enumerate",
        "--config",
        &cfg_arg("toy2.json"),
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("lambda,"));
}
