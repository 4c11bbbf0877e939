use std::path::Path;
use std::process::{Command, Output};

use cmnorm::OutputRecord;
use cmnorm_core::arith::Factorization;
use tempfile::TempDir;

const GOLDEN: &str = include_str!("../../core/tests/data/table1.txt");

fn cmnorm(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmnorm"))
        .args(args)
        .env("CMNORM_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Parses a single JSON record and checks it re-serializes to the same line.
fn json_record(o: &Output) -> OutputRecord {
    let text = stdout(o);
    let line = text.strip_suffix('\n').expect("newline terminated");
    assert!(!line.contains('\n'), "one record per line");
    let rec = OutputRecord::from_json(line).unwrap();
    assert_eq!(rec.to_json(), line);
    rec
}

#[test]
fn hilbert_examples() {
    let dir = TempDir::new().unwrap();
    for (d, poly) in [("4", "x - 1728"), ("3", "x"), ("11", "x + 32768")] {
        let o = cmnorm(dir.path(), &["hilbert", d]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains(&format!("polynomial: {poly}\n")), "{}", stdout(&o));
        assert!(stdout(&o).contains("degree: 1\n"));
    }
    let rec = json_record(&cmnorm(dir.path(), &["hilbert", "23", "--format", "json"]));
    assert_eq!(rec.result["degree"], 3);
    assert_eq!(rec.result["coefficients"][3], "12771880859375");
    assert!(dir.path().join("hd_23.txt").exists());
}

#[test]
fn hilbert_rejects_invalid_discriminants() {
    let dir = TempDir::new().unwrap();
    for d in ["5", "0", "1", "6", "-4", "x"] {
        let o = cmnorm(dir.path(), &["hilbert", d]);
        assert_eq!(code(&o), 2, "D = {d}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn cache_dir_flag_overrides_environment() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    assert_eq!(code(&cmnorm(env_dir.path(), &["hilbert", "15", "--cache-dir", flag])), 0);
    assert!(flag_dir.path().join("hd_15.txt").exists());
    assert!(!env_dir.path().join("hd_15.txt").exists());
}

#[test]
fn table_rows() {
    let dir = TempDir::new().unwrap();
    let o = cmnorm(dir.path(), &["table", "--f-max", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1: 0\n2: 2^4 * 3^3 * 5^3\n");
    assert_eq!(stdout(&cmnorm(dir.path(), &["table", "--f-max", "1"])), "1: 0\n");
    let ten = stdout(&cmnorm(dir.path(), &["table", "--f-max", "10"]));
    assert_eq!(ten.lines().last(), Some("10: 2^24 * 3^30 * 5^3 * 11^6 * 17^6 * 23^6 * 29^3"));
    assert_eq!(code(&cmnorm(dir.path(), &["table", "--f-max", "0"])), 2);
}

#[test]
fn table_csv_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let o = cmnorm(dir.path(), &["table", "--format", "csv", "--f-max", "50"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("f,norm"));
    let rows: Vec<(&str, &str)> = lines.map(|l| l.split_once(',').unwrap()).collect();
    let golden: Vec<(&str, &str)> = GOLDEN.lines().map(|l| l.split_once(": ").unwrap()).collect();
    assert_eq!(rows.len(), 50);
    assert_eq!(rows, golden);
    for ((_, got), (f, want)) in rows.iter().zip(&golden) {
        let got: Factorization = got.parse().unwrap();
        let want: Factorization = want.parse().unwrap();
        assert_eq!(got.recompose(), want.recompose(), "f = {f}");
    }
}

#[test]
fn table_json_record() {
    let dir = TempDir::new().unwrap();
    let rec = json_record(&cmnorm(dir.path(), &["table", "--f-max", "3", "--format", "json"]));
    assert_eq!(rec.command, "table");
    assert_eq!(rec.result["rows"][2]["norm"], "2^15 * 3 * 5^3");
}

#[test]
fn checks_pass() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 7] = [
        &["check", "claim235", "--f-max", "50"],
        &["check", "mod3", "--d-max", "300"],
        &["check", "squares", "--d-max", "300"],
        &["check", "j1728", "--d-max", "300"],
        &["check", "conjecture", "--f-max", "30"],
        &["check", "lv-oracle"],
        &["check", "ss-census"],
    ];
    for args in cases {
        let o = cmnorm(dir.path(), args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("PASS check"), "{args:?}");
        assert!(stdout(&o).contains("violations: none"));
    }
}

#[test]
fn lv_oracle_lists_its_pairs() {
    let dir = TempDir::new().unwrap();
    let rec = json_record(&cmnorm(dir.path(), &["check", "lv-oracle", "--format", "json"]));
    let pairs = rec.result["pairs"].as_array().unwrap();
    let got: Vec<(u64, u64, &str)> = pairs
        .iter()
        .map(|e| (e["p"].as_u64().unwrap(), e["n"].as_u64().unwrap(), e["formula"].as_str().unwrap()))
        .collect();
    assert_eq!(got, vec![(2, 2, "4"), (5, 2, "1"), (7, 2, "1")]);
}

#[test]
fn ss_census_record() {
    let dir = TempDir::new().unwrap();
    let rec = json_record(&cmnorm(dir.path(), &["check", "ss-census", "--format", "json"]));
    assert_eq!(rec.result["census"], serde_json::json!({"2": ["0"], "3": ["0"], "5": ["0"], "7": ["6"]}));
    assert_eq!(code(&cmnorm(dir.path(), &["check", "ss-census", "--primes", "53"])), 2);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["check", "bogus"][..],
        &["check", "mod3", "--format", "csv"],
        &["check", "mod3", "--d-max", "3"],
        &["check", "lv-oracle", "--primes", "3"],
        &["check", "lv-oracle", "--exponent", "3"],
        &["witness", "2,4"],
        &["witness", ""],
        &["--jobs", "0", "hilbert", "3"],
        &[],
    ] {
        assert_eq!(code(&cmnorm(dir.path(), args)), 2, "{args:?}");
    }
}

#[test]
fn witnesses() {
    let dir = TempDir::new().unwrap();
    for (s, q) in [("2,3", 23), ("2", 7), ("3", 23), ("5", 79)] {
        let o = cmnorm(dir.path(), &["witness", s, "--format", "json"]);
        assert_eq!(code(&o), 0, "S = {s}");
        let rec = json_record(&o);
        assert_eq!(rec.result["q"], q, "S = {s}");
        assert_eq!(rec.result["coprime"], true);
        assert!(rec.result["splitting"].as_array().unwrap().iter().all(|e| e["symbol"] == 1));
    }
}

#[test]
fn output_is_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let run = |jobs: &str| {
        let o = cmnorm(dir.path(), &["--jobs", jobs, "check", "mod3", "--d-max", "400", "--format", "json"]);
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let fresh = TempDir::new().unwrap();
    let csv = |jobs: &str| stdout(&cmnorm(fresh.path(), &["--jobs", jobs, "table", "--f-max", "20", "--format", "csv"]));
    assert_eq!(csv("4"), csv("1"));
}
