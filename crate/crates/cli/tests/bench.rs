use std::fs;
use std::process::Command;

use tnare_cli::{run_benchmark, BenchConfig, Example};
use tnare_core::Method;

fn strip_seconds(csv_text: &str) -> String {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    r.records().map(|rec| {
        let rec = rec.unwrap();
        rec.iter().enumerate().filter(|(i, _)| *i != 6).map(|(_, f)| f.to_string()).collect::<Vec<_>>().join(",")
    }).collect::<Vec<_>>().join("\n")
}

#[test]
fn ex1_table_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchConfig::new(Example::Ex1, vec![10], dir.path());
    let s = run_benchmark(&cfg).unwrap();
    assert_eq!(s.cells.len(), 5);
    let text = fs::read_to_string(dir.path().join("ex1_residuals.csv")).unwrap();
    assert!(text.starts_with("example,n,solver,rel_residual,rel_dist_newton,iterations,seconds,status"));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    for rec in r.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[7], "ok");
        assert!(rec[3].parse::<f64>().unwrap() <= 1e-10);
    }
    // Every dumped alpha eigenvalue lies in the open unit disk.
    for m in Method::ALL {
        let dump = fs::read_to_string(dir.path().join("eigs").join(format!("ex1_n10_{m}.txt"))).unwrap();
        assert_eq!(dump.lines().count(), 10);
        for line in dump.lines() {
            let (re, im) = line.split_once(',').unwrap();
            let (re, im): (f64, f64) = (re.parse().unwrap(), im.parse().unwrap());
            assert!(re.hypot(im) < 1.0, "{line}");
        }
    }
}

#[test]
fn deterministic_apart_from_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut cfg = BenchConfig::new(Example::Ex2, vec![4, 9], a.path());
    cfg.seed = 7;
    run_benchmark(&cfg).unwrap();
    cfg.out = b.path().to_path_buf();
    run_benchmark(&cfg).unwrap();
    let read = |d: &std::path::Path| fs::read_to_string(d.join("ex2_residuals.csv")).unwrap();
    assert_eq!(strip_seconds(&read(a.path())), strip_seconds(&read(b.path())));
    let eig = |d: &std::path::Path| fs::read_to_string(d.join("eigs/ex2_n9_da.txt")).unwrap();
    assert_eq!(eig(a.path()), eig(b.path()));
}

#[test]
fn failures_are_recorded_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchConfig::new(Example::Ex3, vec![2], dir.path());
    let s = run_benchmark(&cfg).unwrap();
    let fp = s.cells.iter().find(|c| c.label == "fixedpoint").unwrap();
    assert!(fp.outcome.is_err());
    assert!(fp.status().starts_with("error"));
    let text = fs::read_to_string(dir.path().join("ex3_solutions.txt")).unwrap();
    assert!(text.contains("[x_out]") && text.contains("[x_in]") && text.contains("[x_newton]"));
}

#[test]
fn ex4_forward_error_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = BenchConfig::new(Example::Ex4, vec![3, 4], dir.path());
    cfg.solvers = vec![Method::Qz, Method::Da, Method::Pqz];
    let s = run_benchmark(&cfg).unwrap();
    for n in [3, 4] {
        let fe = |l: &str| s.cells.iter().find(|c| c.n == n && c.label == l).unwrap().forward_error.unwrap();
        assert!(fe("pqz") < fe("qz").min(fe("da")), "n = {n}");
    }
    assert!(dir.path().join("ex4_forward_error.csv").exists());
}

#[test]
fn invalid_configs() {
    let mut cfg = BenchConfig::new(Example::Ex4, vec![3], "unused");
    cfg.sigma = 0.0;
    assert!(run_benchmark(&cfg).is_err());
    let cfg = BenchConfig::new(Example::Ex1, vec![], "unused");
    assert!(cfg.validate().is_err());
}

#[test]
fn binary_gen_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_tnare");
    let prob = dir.path().join("p");
    let st = Command::new(bin).args(["gen", "--example", "ex3", "--n", "2", "--out"]).arg(&prob).status().unwrap();
    assert!(st.success());
    let out = Command::new(bin)
        .args(["solve", "--solver", "pqz", "--region", "none", "--input"])
        .arg(&prob)
        .arg("--out")
        .arg(dir.path().join("s"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("method=pqz"));
    let x = tnare_core::io::read_text::<f64>(dir.path().join("s/x.txt")).unwrap();
    assert!((x[(0, 0)] - 20.1028).abs() < 1e-4);

    let bad = Command::new(bin).args(["solve", "--example", "ex2", "--n", "5"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8(bad.stderr).unwrap().contains("error"));
}
