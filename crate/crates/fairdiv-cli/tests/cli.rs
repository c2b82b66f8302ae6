//! End-to-end tests against the compiled binary: exit codes, report
//! round-trips, and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairdiv_cli::report::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fairdiv"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fairdiv")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fairdiv-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const EXAMPLE_3X5: &str = "3 5\n500 200 50 0 0\n500 0 50 100 250\n500 200 0 100 0\n";

#[test]
fn gen_allocate_check_pipeline() {
    let dir = tmpdir("pipeline");
    let s = dir.join("s.txt");
    let a = dir.join("a.txt");

    let out = run(&[
        "gen", "--n", "3", "--m", "5", "--class", "buyer", "--seed", "7", "--out",
        s.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("class"), Some("buyer"));

    let out = run(&[
        "allocate", "--scenario", s.to_str().unwrap(), "--algo", "gamma", "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert!(report.get("allocation").is_some());
    assert!(report.get("sw_u").is_some());

    let out = run(&[
        "check", "--scenario", s.to_str().unwrap(), "--allocation", a.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("ef1"), Some("Pass"));
    assert_eq!(report.get("in_msw_u"), Some("Pass"));
    assert_eq!(report.get("in_msw_nash"), Some("Unknown (not-evaluated)"));
}

#[test]
fn golden_allocate_report() {
    let dir = tmpdir("golden");
    let s = dir.join("s.txt");
    write(&s, EXAMPLE_3X5);
    let out = run(&["allocate", "--scenario", s.to_str().unwrap(), "--algo", "gamma"]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("allocation"), Some("1 3 2 2 2"));
    assert_eq!(report.get("utility_1"), Some("500"));
    assert_eq!(report.get("utility_2"), Some("400"));
    assert_eq!(report.get("utility_3"), Some("200"));
    assert_eq!(report.get("sw_u"), Some("1100"));
    assert_eq!(report.get("sw_nash"), Some("40000000"));
}

#[test]
fn exit_codes() {
    let dir = tmpdir("exit");
    let s = dir.join("s.txt");
    write(&s, EXAMPLE_3X5);
    let a = dir.join("a.txt");
    write(&a, "1 3 2 2 2\n");

    // 2: input errors.
    let out = run(&[
        "gen", "--n", "0", "--m", "5", "--class", "buyer", "--out",
        dir.join("x.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EmptyDimension"));

    let out = run(&[
        "gen", "--n", "3", "--m", "5", "--class", "identical", "--zero-prob", "0.3", "--out",
        dir.join("x.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidSpec"));

    let bad = dir.join("bad.txt");
    write(&bad, "2 2\n1 2\n");
    let out = run(&["allocate", "--scenario", bad.to_str().unwrap(), "--algo", "gamma"]);
    assert_eq!(out.status.code(), Some(2));

    let short = dir.join("short.txt");
    write(&short, "1 2\n");
    let out = run(&["check", "--scenario", s.to_str().unwrap(), "--allocation", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // 3: algorithm/scenario-class mismatch.
    let out = run(&["allocate", "--scenario", s.to_str().unwrap(), "--algo", "alg-identical"]);
    assert_eq!(out.status.code(), Some(3));

    let general = dir.join("general.txt");
    write(&general, "2 2\n10 10\n3 2\n");
    let out = run(&[
        "check", "--scenario", general.to_str().unwrap(), "--allocation", dir.join("ga.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2)); // missing allocation file

    write(&dir.join("ga.txt"), "1 1\n");
    let out = run(&[
        "check", "--scenario", general.to_str().unwrap(),
        "--allocation", dir.join("ga.txt").to_str().unwrap(),
        "--po-mode", "buyer",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 4: enumeration cap exceeded.
    let out = run(&["enumerate", "--scenario", s.to_str().unwrap(), "--cap", "10"]);
    assert_eq!(out.status.code(), Some(4));

    let out = bin()
        .args(["enumerate", "--scenario", s.to_str().unwrap()])
        .env("FAIRDIV_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // Explicit --cap beats the environment variable.
    let out = bin()
        .args(["enumerate", "--scenario", s.to_str().unwrap(), "--cap", "1000"])
        .env("FAIRDIV_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn enumerate_reports_golden_values() {
    let dir = tmpdir("enum");
    let s = dir.join("s.txt");
    write(&s, "2 2\n10 10\n3 2\n");
    let out = run(&["enumerate", "--scenario", s.to_str().unwrap(), "--dump"]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("total_allocations"), Some("4"));
    assert_eq!(report.get("msw_u_value"), Some("20"));
    assert_eq!(report.get("msw_nash_value"), Some("30"));
    assert_eq!(report.get("msw_u_count"), Some("1"));
    assert_eq!(report.get("msw_u_1"), Some("1 1"));
    assert_eq!(report.get("msw_nash_1"), Some("2 1"));
    assert_eq!(
        report.get("theorem_greedy_allocation_maximizes_utilitarian_welfare"),
        Some("holds")
    );
}

#[test]
fn check_with_enumeration_decides_nash_membership() {
    let dir = tmpdir("nash");
    let s = dir.join("s.txt");
    write(&s, "2 2\n10 10\n3 2\n");
    let a = dir.join("a.txt");
    write(&a, "2 1\n");
    let out = run(&[
        "check", "--scenario", s.to_str().unwrap(), "--allocation", a.to_str().unwrap(),
        "--enumerate",
    ]);
    assert!(out.status.success());
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("in_msw_nash"), Some("Pass"));
    assert_eq!(report.get("ef1"), Some("Pass"));

    write(&a, "1 1\n");
    let out = run(&[
        "check", "--scenario", s.to_str().unwrap(), "--allocation", a.to_str().unwrap(),
        "--enumerate",
    ]);
    let report = Report::parse(&stdout(&out)).unwrap();
    assert_eq!(report.get("ef1"), Some("Fail witness=(2,1)"));
    assert_eq!(report.get("in_msw_u"), Some("Pass"));
    assert_eq!(report.get("po"), Some("Pass"));
    assert_eq!(report.get("in_msw_nash"), Some("Fail witness=(2 1)"));
}

#[test]
fn commands_are_deterministic() {
    let dir = tmpdir("determinism");
    for (i, name) in ["s1.txt", "s2.txt"].iter().enumerate() {
        let path = dir.join(name);
        let out = run(&[
            "gen", "--n", "3", "--m", "4", "--class", "general", "--seed", "42", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "gen run {i}");
    }
    let s1 = std::fs::read(dir.join("s1.txt")).unwrap();
    let s2 = std::fs::read(dir.join("s2.txt")).unwrap();
    assert_eq!(s1, s2, "same seed must give byte-identical files");

    let s1_path = dir.join("s1.txt");
    let args = [
        "allocate", "--scenario", s1_path.to_str().unwrap(), "--algo", "gamma-star",
        "--trace",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn bench_smoke_run() {
    let out = run(&["bench", "--sizes", "10,20", "--trials", "2", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,algorithm,trials,mean_seconds,stddev_seconds"));
    let data: Vec<&str> = text.lines().filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit())).collect();
    assert_eq!(data.len(), 4, "2 sizes x 2 algorithms");
    assert!(text.lines().any(|l| l.starts_with("# fit buyer-identical t=c*n*m:")));

    let out = run(&["bench", "--sizes", "0", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bench", "--sizes", "5:1:2", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
