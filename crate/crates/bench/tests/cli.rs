use std::path::Path;
use std::process::{Command, Output};

use detsort::{keyfile, Distribution};
use detsort_bench::record::read_csv;
use detsort_bench::{BenchRecord, Verdict, CSV_HEADER};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detsort-bench"))
        .args(args)
        .env_remove("DETSORT_WORKERS")
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<BenchRecord> {
    read_csv(std::fs::File::open(path).unwrap()).unwrap()
}

#[test]
fn sweep_writes_one_row_per_s_and_trial() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = bench(&[
        "--mode", "sweep-s", "--n", "65536", "--s-list", "16,32,64,128,256", "--trials", "5",
        "--dist", "uniform", "--seed", "1", "--workers", "2", "--output", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = records(&csv);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.verified == Verdict::Pass && r.workers == 2));
    let header = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(header.lines().next().unwrap(), CSV_HEADER.join(","));
}

#[test]
fn scale_over_three_sizes_and_three_trials() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scale.csv");
    let plots = dir.path().join("plots");
    let out = bench(&[
        "--mode", "scale", "--n-list", "4096,8192,16384", "--trials", "3", "--workers", "1",
        "--output", csv.to_str().unwrap(), "--plot-dir", plots.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = records(&csv);
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let steps: f64 = r.step_ms().iter().sum();
        assert!(steps <= r.total_ms + 1e-2, "{steps} > {}", r.total_ms);
    }
    let tsv = std::fs::read_to_string(plots.join("scaling.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 4);
}

#[test]
fn steps_mode_writes_breakdown() {
    let dir = tempfile::tempdir().unwrap();
    let plots = dir.path().join("plots");
    let out = bench(&[
        "--mode", "steps", "--n-list", "4096,8192", "--trials", "1", "--workers", "1",
        "--plot-dir", plots.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(plots.join("steps.tsv").exists() && plots.join("scaling.tsv").exists());
}

#[test]
fn empty_input_yields_one_row() {
    let out = bench(&["--n", "0", "--workers", "1"]);
    assert!(out.status.success());
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].n, 0);
    assert!(rows[0].is_ok());
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["--s", "48"][..],
        &["--mode", "sweep-s", "--n-list", "1024,2048"],
        &["--n", "10", "--n-list", "10"],
        &["--dist", "cauchy"],
        &["--trials", "0"],
        &["--workers", "0"],
    ] {
        let out = bench(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn sorts_a_key_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("keys.bin");
    let out = bench(&["--dist", "zipf", "--n", "10000", "--seed", "3", "--dump-keys", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(keyfile::read_keys(&input).unwrap(), detsort::generate(Distribution::Zipf, 10000, 3));

    let out = bench(&["--input", input.to_str().unwrap(), "--trials", "2", "--workers", "1"]);
    assert!(out.status.success());
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.n == 10000 && r.distribution == "file:keys.bin" && r.verified == Verdict::Pass));
}

#[test]
fn malformed_key_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.bin");
    std::fs::write(&input, [1u8, 2, 3]).unwrap();
    let out = bench(&["--input", input.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn workers_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_detsort-bench"))
        .args(["--n", "5000", "--trials", "1"])
        .env("DETSORT_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(read_csv(out.stdout.as_slice()).unwrap()[0].workers, 3);
}

#[test]
fn untagged_and_unverified_runs() {
    let out = bench(&["--n", "9000", "--trials", "1", "--tagged", "off", "--workers", "1"]);
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert!(!rows[0].tagged && rows[0].verified == Verdict::Pass);

    let out = bench(&["--n", "9000", "--trials", "1", "--no-verify", "--workers", "1"]);
    assert!(out.status.success());
    assert_eq!(read_csv(out.stdout.as_slice()).unwrap()[0].verified, Verdict::Skipped);
}
