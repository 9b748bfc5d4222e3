use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn steerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerlab")).args(args).env_remove("STEERLAB_JOBS").output().unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = steerlab(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_mub_parameters() {
    let (code, stdout, _) = run(&["validate", "--input", path(&fixture("mub2_params.json"))]);
    assert_eq!(code, 0);
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn validate_names_the_weight_sum() {
    let (code, stdout, stderr) = run(&["validate", "--input", path(&fixture("weight_sum.json"))]);
    assert_eq!(code, 2);
    assert!(stdout.contains("FAIL weight sum"));
    assert!(stderr.contains("weight sum"));
}

#[test]
fn validate_missing_file_is_an_io_error() {
    let (code, _, stderr) = run(&["validate", "--input", "/nonexistent/params.json"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("cannot read"));
}

#[test]
fn bounds_for_qubit_mubs() {
    let (code, stdout, stderr) = run(&["bounds", "--input", path(&fixture("mub2_params.json"))]);
    assert_eq!(code, 0);
    let report = json(&stdout);
    assert!((report["xi_plus"].as_f64().unwrap() - 0.788_675_134_594_812_9).abs() < 1e-9);
    assert!((report["quantum_value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((report["violation_guarantee"].as_f64().unwrap() - 1.267_949_192_431_122_7).abs() < 1e-9);
    assert!(stderr.contains("xi_plus = 0.788675135"));
}

#[test]
fn bounds_for_qubit_sic_family() {
    let (code, stdout, _) = run(&["bounds", "--input", path(&fixture("sic2.json"))]);
    assert_eq!(code, 0);
    let report = json(&stdout);
    assert!((report["xi_plus"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((report["exact_lhs"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((report["violation"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn bounds_on_a_partial_selection() {
    let (code, stdout, _) = run(&["bounds", "--input", path(&fixture("mub2_params.json")), "--select", "1,3"]);
    assert_eq!(code, 0);
    let report = json(&stdout);
    assert!((report["quantum_value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(report["subnormalized"], Value::Bool(true));
    assert_eq!(report["selection"], serde_json::json!([1, 3]));
}

#[test]
fn bounds_rejects_out_of_range_selection() {
    let (code, _, _) = run(&["bounds", "--input", path(&fixture("mub2_params.json")), "--select", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn lhs_on_qubit_mub_fixture() {
    let (code, stdout, _) = run(&["lhs", "--input", path(&fixture("mub2.json"))]);
    assert_eq!(code, 0);
    let report = json(&stdout);
    assert!((report["s_lhs"].as_f64().unwrap() - (3.0 + 3f64.sqrt()) / 6.0).abs() < 1e-9);
    assert!(report["gap"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(report["status"], "exact");
    assert_eq!(report["strategy_count"], 8);
}

#[test]
fn lhs_cap_and_heuristic() {
    let input = fixture("mub2.json");
    let (code, _, stderr) = run(&["lhs", "--input", path(&input), "--cap", "4"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cap"));
    let (code, stdout, _) = run(&["lhs", "--input", path(&input), "--cap", "4", "--heuristic"]);
    assert_eq!(code, 0);
    let report = json(&stdout);
    assert_eq!(report["status"], "non-exact");
    assert_eq!(report["exact"], Value::Bool(false));
    assert!(report["s_lhs"].as_f64().unwrap() <= (3.0 + 3f64.sqrt()) / 6.0 + 1e-12);
}

#[test]
fn lhs_beyond_default_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("mub7.json");
    let (code, _, _) = run(&["build", "mub", "--d", "7", "--settings", "8", "--output", path(&fam)]);
    assert_eq!(code, 0);
    // 7^8 = 5 764 801 strategies.
    let (code, _, _) = run(&["lhs", "--input", path(&fam), "--cap", "5000000"]);
    assert_eq!(code, 3);
}

#[test]
fn sweep_mub_column_decreases_toward_limit() {
    let (code, stdout, stderr) = run(&["sweep", "--input", path(&fixture("sweep_mub.json"))]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "d,xi_plus,xi_minus,delta,s_q,violation_guarantee,constructible");
    let xi: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(xi.len(), 46);
    assert!(xi.windows(2).all(|w| w[1] < w[0]));
    assert!(xi.iter().all(|&x| x > 1.0 / 3f64.sqrt()));
    assert!(stderr.contains("decreasing: true"));
}

#[test]
fn sweep_dichotomic_does_not_vanish() {
    let (code, stdout, _) = run(&["sweep", "--input", path(&fixture("sweep_dichotomic.json"))]);
    assert_eq!(code, 0);
    let xi: Vec<f64> = stdout.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(xi.iter().all(|&x| x > 0.5));
}

#[test]
fn sweep_invalid_kind_exits_one() {
    let (code, _, _) = run(&["sweep", "--input", path(&fixture("sweep_invalid.json"))]);
    assert_eq!(code, 1);
}

#[test]
fn sweep_reports_inadmissible_points_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"kind": "mub", "L": 4, "d_values": [2, 3, 5]}"#).unwrap();
    let (code, stdout, stderr) = run(&["sweep", "--input", path(&spec)]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 3);
    assert!(stderr.contains("1 warnings"));
}

#[test]
fn verify_ops_on_fixtures() {
    let (code, stdout, _) = run(&["verify-ops", "--input", path(&fixture("sic2.json"))]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS"));

    let (code, stdout, _) = run(&[
        "verify-ops",
        "--input",
        path(&fixture("mub2_perturbed.json")),
        "--params",
        path(&fixture("mub2_params.json")),
    ]);
    assert_eq!(code, 2);
    assert!(stdout.contains("FAIL max residual 3.333e-3"));

    let (code, _, stderr) = run(&["verify-ops", "--input", path(&fixture("mub2_perturbed.json"))]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not equiangular"));

    let (code, _, stderr) = run(&["verify-ops", "--input", path(&fixture("non_hermitian.json"))]);
    assert_eq!(code, 1);
    assert!(stderr.contains("not Hermitian"));
}

#[test]
fn tolerance_flags_must_be_positive() {
    let (code, _, _) = run(&["validate", "--input", path(&fixture("mub2_params.json")), "--tol-constraint", "0"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["validate", "--input", path(&fixture("weight_sum.json")), "--tol-constraint", "0.1"]);
    assert_eq!(code, 0);
}

#[test]
fn outputs_do_not_depend_on_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("mub5.json");
    run(&["build", "mub", "--d", "5", "--settings", "6", "--output", path(&fam)]);
    let with_jobs = |jobs: &str, args: &[&str]| {
        let mut all = args.to_vec();
        all.extend_from_slice(&["--jobs", jobs]);
        steerlab(&all).stdout
    };
    let lhs = ["lhs", "--input", path(&fam)];
    assert_eq!(with_jobs("1", &lhs), with_jobs("4", &lhs));
    let spec = fixture("sweep_mub.json");
    let sweep = ["sweep", "--input", path(&spec)];
    assert_eq!(with_jobs("1", &sweep), with_jobs("3", &sweep));
}

#[test]
fn jobs_default_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_steerlab"))
        .args(["lhs", "--input", path(&fixture("mub2.json"))])
        .env("STEERLAB_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "zero workers from the environment is a usage error");
}
