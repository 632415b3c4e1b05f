//! End-to-end checks of the command-line interface: flag parsing, exit
//! codes, output schemas, byte-identical reruns and run manifests.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphene-search"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

#[test]
fn spectrum_csv_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let svg = dir.path().join("spec.svg");
    let args = [
        "spectrum",
        "--cells",
        "6x6",
        "--gamma",
        "0:1.2:0.05",
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ];
    let res = run(&args);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let csv = read(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("gamma,index,eigenvalue"));
    // 25 gamma points x 72 eigenvalues
    assert_eq!(csv.lines().count(), 1 + 25 * 72);
    assert!(csv.ends_with('\n'));

    let svg_text = read(&svg);
    assert!(svg_text.starts_with("<svg"));
    // one polyline per eigenvalue index plus the two tracked branches
    assert_eq!(svg_text.matches("<polyline").count(), 72 + 2);

    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("spec.manifest.json"))).unwrap();
    assert_eq!(manifest["subcommand"], "spectrum");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for entry in outputs {
        assert_eq!(entry["sha256"].as_str().unwrap().len(), 64);
    }

    // identical invocation reproduces identical bytes
    let res2 = run(&args);
    assert!(res2.status.success());
    assert_eq!(csv, read(&out));
}

#[test]
fn search_outputs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("search.csv");
    let res = run(&[
        "search",
        "--cells",
        "6x6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let csv = read(&out);
    assert!(csv.starts_with("t,P_total,P_site1,P_site2,P_site3,P_marked\n"));
    let first_row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first_row.len(), 6);
    let p_total_at_zero: f64 = first_row[1].parse().unwrap();
    assert!(p_total_at_zero < 1e-20);

    let summary: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("search.summary.json"))).unwrap();
    assert!(summary["t_peak"].as_f64().unwrap() > 0.0);
    let p_peak = summary["p_peak"].as_f64().unwrap();
    assert!((0.5..0.7).contains(&p_peak), "p_peak {p_peak}");
    assert!(summary["prediction_exact"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("search.manifest.json").exists());
}

#[test]
fn scaling_gap_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gap.csv");
    let res = run(&[
        "scaling",
        "--study",
        "gap",
        "--sizes",
        "6..15:3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = read(&out);
    assert!(csv.starts_with("cells,n_sites,e_plus,delta\n"));
    assert_eq!(csv.lines().count(), 1 + 4);
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("gap.fit.json"))).unwrap();
    assert_eq!(report["verdict"], "c/sqrt(N ln N)");
}

#[test]
fn scaling_moments_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("moments.csv");
    let res = run(&[
        "scaling",
        "--study",
        "moments",
        "--sizes",
        "6..18:3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = read(&out);
    let i2: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(i2.windows(2).all(|w| w[1] > w[0]), "I2 column increases");
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("moments.fit.json"))).unwrap();
    assert!(report["log_fit"]["r_squared"].as_f64().unwrap() >= 0.99);
    assert_eq!(report["limit"]["verdict"], "4*sqrt(3)");
}

#[test]
fn transfer_run_and_classification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("transfer.csv");
    let res = run(&[
        "transfer",
        "--cells",
        "6x6",
        "--mark1",
        "0,0,A",
        "--mark2",
        "3,3,A",
        "--dt",
        "0.05",
        "--tmax",
        "60",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = read(&out);
    assert!(csv.starts_with("t,P_ell1,P_ell2\n"));
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(cols[1] >= 0.0 && cols[1] <= 1.0);
        assert!(cols[2] >= 0.0 && cols[2] <= 1.0);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("transfer.summary.json"))).unwrap();
    assert_eq!(summary["classification"], "same-sublattice");
    assert!(summary["period"].as_f64().is_some());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    // identical marks
    let res = run(&[
        "transfer",
        "--cells",
        "6x6",
        "--mark1",
        "0,0,A",
        "--mark2",
        "0,0,A",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    // malformed cells
    let res = run(&["search", "--cells", "twelve", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    // unknown study
    let res = run(&["scaling", "--study", "banana", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    // unknown flag (clap's own exit code)
    let res = run(&["spectrum", "--frequency", "1"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn numerical_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    // dt far too coarse undersamples the oscillation
    let res = run(&[
        "search",
        "--cells",
        "6x6",
        "--dt",
        "50",
        "--tmax",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&res.stderr);
    assert!(msg.contains("search run"), "stage named in '{msg}'");
    // optimal start needs exact Dirac points
    let res = run(&["search", "--cells", "8x8", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn io_errors_exit_4() {
    let res = run(&[
        "search",
        "--cells",
        "6x6",
        "--out",
        "/nonexistent-dir/deep/search.csv",
    ]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn thread_cap_env_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let res = bin()
        .env("GRAPHENE_SEARCH_THREADS", "1")
        .args([
            "spectrum",
            "--cells",
            "6x6",
            "--gamma",
            "0.9:1.1:0.1",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(res.status.success());
}
