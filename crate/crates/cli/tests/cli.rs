use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const PRIMES: [&str; 8] = ["2", "3", "5", "7", "11", "13", "17", "19"];
const EXAMPLES: [&str; 17] = [
    "5.6", "5.6.1", "5.6.2", "5.6.3", "5.6.4", "7.1", "7.1.1", "7.1.2", "7.1.3", "11.1", "11.1.a", "8.1", "8.2", "8.3",
    "x5", "x7", "x11",
];
const LATTICES: [&str; 7] = ["U(7)+K7", "U+E8+E8", "U+H5+A4", "A4*(5)", "U(2)+E8(2)", "K7", "H13"];

fn k3auto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3auto")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// Every invocation with a stored golden file, as (arguments, formats).
fn manifest() -> Vec<(Vec<String>, Vec<&'static str>)> {
    let own = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut out = vec![(own(&["table1"]), vec!["md", "json", "csv"])];
    for p in PRIMES {
        for cmd in ["table1", "classify", "moduli"] {
            out.push((own(&[cmd, "--prime", p]), vec!["md", "json"]));
        }
    }
    for e in EXAMPLES {
        out.push((own(&["fibers", "--example", e]), vec!["md", "json"]));
    }
    for l in LATTICES {
        out.push((own(&["lattice", "info", l]), vec!["md", "json"]));
    }
    out.push((own(&["appendix", "verify"]), vec!["md", "json"]));
    out.push((own(&["verify-all"]), vec!["md", "json"]));
    out
}

#[test]
fn golden_files_reproduce() {
    let dir = golden_dir();
    let dir_arg = dir.to_str().unwrap();
    let mut covered = 0;
    for (args, formats) in manifest() {
        for fmt in formats {
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--format", fmt, "--golden-dir", dir_arg]);
            let out = k3auto(&full);
            assert_eq!(out.status.code(), Some(0), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
            covered += 1;
        }
    }
    let files = fs::read_dir(&dir).unwrap().count();
    assert_eq!(covered, files, "golden files without a manifest entry");
}

#[test]
fn lattice_info_example() {
    let out = k3auto(&["lattice", "info", "U(7)+K7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("U(7)+K7: rank 4, signature (1,3), det -343, 7-elementary a=3\n"), "{text}");
}

#[test]
fn table1_row_for_five() {
    let out = k3auto(&["table1", "--prime", "5", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("| 5   | 2α+3, α+1 | 3α+4 | (r-6)/4 |"));
}

#[test]
fn fibers_example_order_17() {
    let out = k3auto(&["fibers", "--example", "8.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("configuration: IV + III + 17 I1\n"), "{text}");
    assert!(text.contains("euler: 24\n"));

    let json: Value = serde_json::from_str(&stdout(&k3auto(&["fibers", "--example", "8.2", "--format", "json"]))).unwrap();
    assert_eq!(json["euler_total"], 24);
    let types: Vec<&str> = json["places"].as_array().unwrap().iter().map(|p| p["type"].as_str().unwrap()).collect();
    assert_eq!(types, ["IV", "I1", "III"]);
}

#[test]
fn explicit_model_and_bindings() {
    let out = k3auto(&["fibers", "--f", "a*t^7 + b", "--g", "t^7 - 2", "--bind", "a=0", "--bind", "b=-3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["euler_total"], 24);
}

#[test]
fn json_is_key_sorted_and_round_trips() {
    for args in [
        vec!["classify", "--prime", "7"],
        vec!["moduli", "--prime", "5"],
        vec!["table1"],
        vec!["fibers", "--example", "8.3"],
        vec!["lattice", "info", "U+K7"],
        vec!["appendix", "verify"],
    ] {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let text = stdout(&k3auto(&full));
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn classify_rows_follow_the_schema() {
    let text = stdout(&k3auto(&["classify", "--prime", "5", "--format", "json"]));
    let rows: Vec<Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 7);
    let want: BTreeSet<&str> = [
        "p", "r", "a", "m", "special", "curve_genera", "n_t", "n", "alpha", "g_thm", "k_thm", "S", "T", "moduli_dim",
    ]
    .into();
    for row in &rows {
        let keys: BTreeSet<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, want);
    }
    let two: Vec<Value> = serde_json::from_str(&stdout(&k3auto(&["classify", "--prime", "2", "--format", "json"]))).unwrap();
    assert!(two.iter().all(|r| r.get("delta").is_some()));
}

#[test]
fn csv_has_rectangular_rows() {
    let text = stdout(&k3auto(&["classify", "--prime", "3", "--format", "csv"]));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let width = reader.headers().unwrap().len();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r.len() == width));
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["fibers", "--example", "5.6", "--format", "json"], vec!["classify", "--prime", "2"]] {
        assert_eq!(k3auto(&args).stdout, k3auto(&args).stdout);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["classify"],
        vec!["classify", "--prime", "4"],
        vec!["table1", "--prime", "23"],
        vec!["lattice", "info", "U("],
        vec!["lattice", "info", "Q7"],
        vec!["fibers"],
        vec!["fibers", "--example", "no-such-example"],
        vec!["fibers", "--example", "8.2", "--f", "t"],
        vec!["fibers", "--f", "t^9", "--g", "1"],
        vec!["fibers", "--f", "t^4", "--g", "t^6"],
        vec!["fibers", "--f", "0", "--g", "0"],
        vec!["fibers", "--f", "a", "--g", "1"],
        vec!["fibers", "--f", "t", "--g", "1", "--bind", "t=2"],
        vec!["fibers", "--f", "t", "--g", "1", "--bind", "a=1/0"],
        vec!["fibers", "--f", "t", "--g", "1", "--bind", "a=1"],
        vec!["fibers", "--f", "a*t", "--g", "1", "--bind", "a=1", "--bind", "a=2"],
        vec!["fibers", "--example", "8.2", "--bind", "zzz=1"],
        vec!["table1", "--format", "xml"],
        vec!["table1", "--update-golden"],
    ] {
        let out = k3auto(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(k3auto(&["--help"]).status.code(), Some(0));
}

#[test]
fn golden_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();

    let missing = k3auto(&["table1", "--prime", "7", "--golden-dir", d]);
    assert_eq!(missing.status.code(), Some(1));

    let update = k3auto(&["table1", "--prime", "7", "--golden-dir", d, "--update-golden"]);
    assert_eq!(update.status.code(), Some(0));
    let path = dir.path().join("table1-p7.md");
    assert!(path.exists());
    assert_eq!(k3auto(&["table1", "--prime", "7", "--golden-dir", d]).status.code(), Some(0));

    let tampered = fs::read_to_string(&path).unwrap().replace("5α+3", "5α+4");
    fs::write(&path, tampered).unwrap();
    let out = k3auto(&["table1", "--prime", "7", "--golden-dir", d]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn overridden_example_is_reported_without_failing() {
    let out = k3auto(&["fibers", "--example", "5.6", "--bind", "alpha=0", "--bind", "gamma=0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("alpha = 0"));
}
