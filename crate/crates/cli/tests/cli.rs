use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const H1: &str = "3 4\n1 1 2 0 1 2\n2 1 1 1 2\n1 1 1 3 0\n";

fn dhgpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhgpart"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn partition_h1() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "h1.dhg", H1);
    let parts = dir.path().join("parts.txt");
    let metrics = dir.path().join("m.json");
    let out = dhgpart(&[
        "partition", "--input", s(&input), "--max-size", "2", "--max-inbound", "4",
        "--out", s(&parts), "--metrics", s(&metrics),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(m["num_partitions"], 2);
    assert_eq!(m["valid"], true);
    assert_eq!(m["phase_ms"]["total"], 0.0);

    let eval = dhgpart(&[
        "eval", "--input", s(&input), "--parts", s(&parts), "--max-size", "2", "--max-inbound", "4",
    ]);
    assert_eq!(eval.status.code(), Some(0));
    let text = String::from_utf8(eval.stdout).unwrap();
    assert!(text.contains("partitions: 2"), "{text}");
}

#[test]
fn partition_writes_stdout_without_out() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "h1.dhg", H1);
    let out = dhgpart(&["partition", "--input", s(&input), "--max-size", "4", "--max-inbound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n0\n0\n0\n");
}

#[test]
fn partition_error_codes() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "h1.dhg", H1);
    let missing = dir.path().join("nope.dhg");
    let out = dhgpart(&["partition", "--input", s(&missing), "--max-size", "2", "--max-inbound", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let out = dhgpart(&["partition", "--input", s(&input), "--max-size", "2", "--max-inbound", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = put(&dir, "bad.dhg", "1 2\n1 1 1 0 5\n");
    let out = dhgpart(&["partition", "--input", s(&bad), "--max-size", "2", "--max-inbound", "4"]);
    assert_eq!(out.status.code(), Some(1));

    let out = dhgpart(&["partition", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_reports_violations() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "h1.dhg", H1);
    // Labels with a gap: partition 5 holds three nodes.
    let parts = put(&dir, "parts.txt", "5\n5\n5\n0\n");
    let out = dhgpart(&[
        "eval", "--input", s(&input), "--parts", s(&parts), "--max-size", "2", "--max-inbound", "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("connectivity: 1\n"), "{text}");
    assert!(text.contains("violation: partition 5 size 3 > 2"), "{text}");

    let short = put(&dir, "short.txt", "0\n0\n");
    let out = dhgpart(&[
        "eval", "--input", s(&input), "--parts", s(&short), "--max-size", "2", "--max-inbound", "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn baseline_onepass_h1() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "h1.dhg", H1);
    let out = dhgpart(&[
        "baseline", "--method", "onepass", "--input", s(&input), "--max-size", "2", "--max-inbound", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n0\n1\n1\n");

    let out = dhgpart(&[
        "baseline", "--method", "overlap", "--input", s(&input), "--max-size", "2", "--max-inbound", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n0\n1\n2\n");
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.dhg");
    let b = dir.path().join("b.dhg");
    for p in [&a, &b] {
        let out = dhgpart(&["gen", "--nodes", "100", "--edges", "150", "--max-pins", "5", "--seed", "7", "--out", s(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn oracle_guard_and_result() {
    let dir = TempDir::new().unwrap();
    let big = dhgpart(&["gen", "--nodes", "12", "--edges", "10", "--seed", "1"]);
    let big = put(&dir, "big.dhg", std::str::from_utf8(&big.stdout).unwrap());
    let out = dhgpart(&["oracle", "--input", s(&big), "--max-size", "4", "--max-inbound", "20"]);
    assert_eq!(out.status.code(), Some(2));

    let input = put(&dir, "h1.dhg", H1);
    let metrics = dir.path().join("m.json");
    let out = dhgpart(&[
        "oracle", "--input", s(&input), "--max-size", "2", "--max-inbound", "2", "--metrics", s(&metrics),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n1\n1\n0\n");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(m["connectivity"], 1.0);
}

#[test]
fn convert_hgr() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "g.hgr", "% two edges\n2 3\n1 2 3\n3 1\n");
    let out = dhgpart(&["convert", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2 3\n1 1 2 0 1 2\n1 1 1 2 0\n");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(dhgpart(&["--help"]).status.code(), Some(0));
    assert_eq!(dhgpart(&["--version"]).status.code(), Some(0));
    assert_eq!(dhgpart(&["frobnicate"]).status.code(), Some(1));
}
