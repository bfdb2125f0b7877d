//! The `hyperest` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn hyperest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperest")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn generate_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["generate", "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    hyperest(&args)
}

#[test]
fn generate_writes_header_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let flags = ["--kind", "random", "--n", "64", "--d", "3", "--m", "500", "--seed", "1"];
    stdout(&generate_to(&a, &flags));
    stdout(&generate_to(&b, &flags));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "64 3 500");
    assert_eq!(text.lines().count(), 501);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn generate_rejects_too_many_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate_to(&dir.path().join("x.txt"), &["--n", "5", "--d", "3", "--m", "11"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}

#[test]
fn brute_counts_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    stdout(&generate_to(&empty, &["--kind", "empty", "--n", "10", "--d", "3"]));
    assert_eq!(stdout(&hyperest(&["brute", empty.to_str().unwrap()])).trim(), "0");

    let clique = dir.path().join("clique.txt");
    stdout(&generate_to(&clique, &["--kind", "clique", "--n", "20", "--d", "3", "--clique", "6"]));
    assert_eq!(stdout(&hyperest(&["brute", clique.to_str().unwrap()])).trim(), "20");

    let random = dir.path().join("random.txt");
    stdout(&generate_to(&random, &["--n", "30", "--d", "2", "--m", "77"]));
    assert_eq!(stdout(&hyperest(&["brute", random.to_str().unwrap()])).trim(), "77");
}

#[test]
fn estimate_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    stdout(&generate_to(&empty, &["--kind", "empty", "--n", "32", "--d", "2"]));
    let report: serde_json::Value =
        serde_json::from_str(&stdout(&hyperest(&["estimate", empty.to_str().unwrap()]))).unwrap();
    assert_eq!(report["estimate"], 0.0);
    assert!(report["rel_err"].is_null());

    let file = dir.path().join("h.txt");
    stdout(&generate_to(&file, &["--n", "128", "--d", "2", "--m", "600", "--seed", "4"]));
    let args = [
        "estimate", file.to_str().unwrap(), "--oracle-mode", "direct", "--profile", "practical", "--eps", "0.1",
        "--no-timing",
    ];
    let first = stdout(&hyperest(&args));
    let report: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["true_m"], 600);
    assert!(report["rel_err"].as_f64().unwrap() <= 0.1);
    assert_eq!(first, stdout(&hyperest(&args)), "reports without timing are byte-identical");
}

#[test]
fn theoretical_profile_constants_are_reported() {
    let out = stdout(&hyperest(&["estimate", "--n", "16", "--d", "2", "--m", "10", "--profile", "theoretical"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let c = &report["constants"];
    // tau = k^2 4^(2d) theta^(2d) 16 d^2 d! L^(d+2) / eps^2 with k = 4, theta = 2d, L = 4, eps = 0.1.
    assert_eq!(c["tau"], 16u64 * 256 * 256 * 16 * 4 * 2 * 256 * 100);
    // N = L^(4d) / eps^2.
    assert_eq!(c["n_max"], 65536u64 * 100);
    assert!(c["gamma"].as_u64().unwrap() > 0);
}

#[test]
fn sweep_writes_csv_rows() {
    let out = hyperest(&[
        "sweep", "--d", "2", "--from", "4", "--to", "5", "--density", "2", "--eps", "0.5", "--repeat", "3",
        "--no-timing",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), hyperest::experiment::SWEEP_HEADER);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let seeds: std::collections::HashSet<&str> = rows.iter().filter(|r| r[0] == "16").map(|r| r[3]).collect();
    assert_eq!(seeds.len(), 3);
}
