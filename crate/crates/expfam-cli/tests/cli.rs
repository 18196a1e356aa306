//! Command-line behavior: exit codes, output schemas, emit selection, and
//! the machine-readable failure report.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_expfam-lab"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("expfam-lab-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn missing_seed_is_a_config_error() {
    let out = run(&["risk-curve"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_family_is_a_config_error_with_json_report() {
    let dir = scratch("unknown-family");
    let out = run(&[
        "risk-curve",
        "--family",
        "dirichlet:3",
        "--seed",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"status\":\"config-error\""), "{stderr}");
}

#[test]
fn bad_grid_and_bad_mu_star_are_config_errors() {
    let dir = scratch("bad-grid");
    let out = run(&["risk-curve", "--seed", "1", "--n-grid", "5,3", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "risk-curve",
        "--seed",
        "1",
        "--mu-star",
        "-2",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "negative variance is outside M");
}

#[test]
fn divergent_decomposition_is_an_assertion_failure() {
    // The categorical MLE at n = 1 always has a zero count, so the
    // bias-variance decomposition is divergent: exit code 3.
    let dir = scratch("assertion");
    let out = run(&[
        "bias-variance",
        "--family",
        "categorical:3",
        "--n0",
        "0",
        "--n-grid",
        "1,2",
        "--trials",
        "200",
        "--seed",
        "7",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"status\":\"assertion-failed\""), "{stderr}");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let blocker = std::env::temp_dir().join(format!("expfam-lab-blocker-{}", std::process::id()));
    std::fs::write(&blocker, b"file, not a directory").unwrap();
    let out = run(&[
        "smd-check",
        "--runs",
        "2",
        "--seed",
        "1",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"status\":\"io-error\""), "{stderr}");
    let _ = std::fs::remove_file(&blocker);
}

#[test]
fn risk_curve_schema_and_inf_literals() {
    let dir = scratch("schema");
    let out = run(&[
        "risk-curve",
        "--seed",
        "11",
        "--trials",
        "400",
        "--n-grid",
        "1,2,5,20",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read_csv(&dir.join("risk-curve-gaussian-variance-11.csv"));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,estimator,mean,std_err,lo90,hi90,infinite_fraction,bound,asymptote"
    );
    // n = 1, 2: the MLE expected risk is divergent, written as the `inf`
    // literal with infinite_fraction 1.
    let n1: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((n1[0], n1[1], n1[2], n1[6]), ("1", "mle", "inf", "1"));
    assert_eq!((n1[4], n1[5], n1[7]), ("inf", "inf", "inf"));
    // MAP rows are always finite.
    for line in csv.lines().skip(1).filter(|l| l.contains(",map,")) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_ne!(cells[2], "inf", "MAP expected risk must be finite: {line}");
    }
    assert!(dir.join("risk-curve-gaussian-variance-11.svg").exists());
}

#[test]
fn emit_csv_only_skips_svg() {
    let dir = scratch("emit");
    let out = run(&[
        "bias-variance",
        "--seed",
        "3",
        "--trials",
        "300",
        "--n-grid",
        "2,8",
        "--emit",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("bias-variance-full-gaussian-1d-3.csv").exists());
    assert!(!dir.join("bias-variance-full-gaussian-1d-3.svg").exists());
}

#[test]
fn landscape_csv_covers_the_full_grid() {
    let dir = scratch("landscape");
    let out = run(&[
        "prior-landscape",
        "--seed",
        "5",
        "--trials",
        "200",
        "--grid-points",
        "6",
        "--n-grid",
        "1,5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read_csv(&dir.join("prior-landscape-gaussian-variance-5.csv"));
    assert_eq!(csv.lines().next().unwrap(), "n,n0,mu0,risk");
    assert_eq!(csv.lines().count(), 1 + 2 * 6 * 6);
    assert!(!csv.contains("inf"), "MAP landscape must be finite");
}

#[test]
fn svg_outputs_are_valid_enough_and_deterministic() {
    let dir_a = scratch("svg-a");
    let dir_b = scratch("svg-b");
    for dir in [&dir_a, &dir_b] {
        let out = run(&[
            "risk-curve",
            "--seed",
            "13",
            "--trials",
            "500",
            "--n-grid",
            "2,10,40",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = read_csv(&dir_a.join("risk-curve-gaussian-variance-13.svg"));
    let b = read_csv(&dir_b.join("risk-curve-gaussian-variance-13.svg"));
    assert_eq!(a, b, "SVG must be deterministic");
    assert!(a.starts_with("<svg"));
    assert!(a.trim_end().ends_with("</svg>"));
}
