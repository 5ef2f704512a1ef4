use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use lsq_core::io::{read_reports_csv, read_reports_json};
use lsq_core::{structure_report, ReportOptions};

fn lsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsq"))
        .args(args)
        .env_remove("LSQ_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn catalog_order_four() {
    let o = lsq(&["catalog", "--order", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with("trivial")).count(), 1);
    let listed: BTreeSet<String> = text.lines().filter(|l| !l.ends_with("trivial")).map(str::to_string).collect();
    let printed: BTreeSet<String> = lsq_core::tables::parameter_table(2)
        .unwrap()
        .iter()
        .filter(|r| r.n == 4)
        .map(|r| r.structure.to_string())
        .collect();
    assert_eq!(listed, printed);
    let all = lsq(&["catalog", "--order", "3", "--all-orderings", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&all.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 3);
}

#[test]
fn reports_match_library() {
    let csv = lsq(&["report", "--order", "4", "--format", "csv"]);
    assert!(csv.status.success());
    let from_csv = read_reports_csv(csv.stdout.as_slice()).unwrap();
    let json = lsq(&["report", "--order", "4", "--format", "json"]);
    assert_eq!(read_reports_json(json.stdout.as_slice()).unwrap(), from_csv);
    let mut direct = Vec::new();
    for e in lsq_core::cycle_structure_catalog(4, lsq_core::SearchLimits::UNLIMITED, false).unwrap() {
        if !e.trivial {
            direct.extend(structure_report(&e.structure, &ReportOptions::default()).unwrap());
        }
    }
    assert_eq!(from_csv, direct);
    for r in &from_csv {
        r.check().unwrap();
    }
}

#[test]
fn class_filter() {
    let o = lsq(&["report", "--order", "4", "--class", "c_{4,1}", "--format", "csv"]);
    let rows = read_reports_csv(o.stdout.as_slice()).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.class_label == "c_{4,1}"));
}

#[test]
fn verify_exit_codes() {
    let ok = lsq(&["verify", "--table", "1"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("0 mismatches"));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.csv",
        "n,structure,class,v,b,k,r,mult\n3,\"0,0,1|0,0,1|0,0,1\",\"c_{3,1}\",12,8,3,3,1\n",
    );
    let mismatch = lsq(&["verify", "--against", &bad]);
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(stdout(&mismatch).contains("r: printed 3, computed 2"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lsq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lsq(&["report"]).status.code(), Some(2));
    assert_eq!(lsq(&["report", "--order", "4", "--structure", "0,0,1|0,0,1|0,0,1"]).status.code(), Some(2));
    assert_eq!(lsq(&["catalog", "--order", "3", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(lsq(&["enum", "--structure", "1,1|1,1|1,1"]).status.code(), Some(2));
    assert_eq!(lsq(&["verify", "--table", "7"]).status.code(), Some(2));
}

#[test]
fn square_commands() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "z3.txt", "3\n1 2 3\n2 3 1\n3 1 2\n");
    let inv = lsq(&["invariants", "--square", &sq, "--group"]);
    assert_eq!(stdout(&inv).trim(), "(3,0,1,3,3,18)");
    let group = lsq(&["group", "--square", &sq]);
    let text = stdout(&group);
    assert!(text.starts_with("order 18"));
    assert_eq!(text.lines().count(), 19);
    let json = lsq(&["group", "--square", &sq, "--structure", "0,0,1|0,0,1|0,0,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let l: lsq_core::IsotopismCycleStructure = "0,0,1|0,0,1|0,0,1".parse().unwrap();
    let z3 = lsq_core::LatinSquare::cyclic(3);
    let s3 = lsq_core::perm::all_permutations(3);
    let mut brute = 0;
    for a in &s3 {
        for b in &s3 {
            for c in &s3 {
                let t = lsq_core::Isotopism::new(a.clone(), b.clone(), c.clone()).unwrap();
                brute += usize::from(t.cycle_structure() == l && z3.is_autotopism(&t));
            }
        }
    }
    assert_eq!(v.as_array().unwrap().len(), brute);
    let broken = write(dir.path(), "bad.txt", "3\n1 2 3\n1 3 2\n3 1 2\n");
    assert_eq!(lsq(&["invariants", "--square", &broken]).status.code(), Some(2));
}

#[test]
fn enum_and_classify_through_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let iso = write(dir.path(), "theta.txt", "alpha: (1 2 3)\nbeta: (1 2 3)\ngamma: (1 3 2)\n");
    let run = |extra: &[&str]| {
        let mut args = vec!["enum", "--isotopism", iso.as_str()];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_lsq"))
            .args(&args)
            .env("LSQ_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let cold = run(&[]);
    assert!(cold.status.success());
    assert!(std::fs::read_dir(&cache).unwrap().count() == 1);
    let warm = run(&[]);
    assert_eq!(cold.stdout, warm.stdout);
    let text = stdout(&cold);
    assert!(text.starts_with("theta "));
    assert!(text.lines().any(|l| l == "1,2,3,2,3,1,3,1,2"));

    let out = dir.path().join("classes.json");
    let c = lsq(&[
        "classify",
        "--structure",
        "1,0,1,0|1,0,1,0|1,0,1,0",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(c.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v[0]["label"], "c_{4,2}");
    assert_eq!(v[0]["size"], 9);
}

#[test]
fn worker_count_does_not_change_output() {
    let one = lsq(&["report", "--order", "5", "--format", "csv", "--workers", "1"]);
    let many = lsq(&["report", "--order", "5", "--format", "csv", "--workers", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}
