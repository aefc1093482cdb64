use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenratio")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn strip_wall_time(report: &str) -> String {
    report.lines().filter(|l| !l.contains("\"kind\":\"summary\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn gen_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c8.txt");
    let f = file.to_str().unwrap();
    assert!(bin(&["gen", "cycle", "--n", "8", "--out", f]).status.success());
    assert!(fs::read_to_string(&file).unwrap().starts_with("8 8\n"));

    let out = bin(&["eigenratio", f]);
    assert!(out.status.success());
    let r: f64 = stdout(&out).trim().parse().unwrap();
    let expected = (2.0 - 2.0 * (std::f64::consts::PI / 4.0).cos()) / 4.0;
    assert!((r - expected).abs() < 1e-12);

    let out = bin(&["spectrum", f]);
    let values: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 8);
    assert!(values[0].abs() < 1e-9 && (values[7] - 4.0).abs() < 1e-9);

    let out = bin(&["hamilton", f]);
    assert_eq!(stdout(&out).split_whitespace().count(), 8);
}

#[test]
fn hamilton_reports_absence() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let f = file.to_str().unwrap();
    assert!(bin(&["gen", "petersen", "--out", f]).status.success());
    assert_eq!(stdout(&bin(&["hamilton", f])).trim(), "none");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "2 1\n0 0\n").unwrap();
    let out = bin(&["eigenratio", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["counterexample-scan", "--q", "10"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "trees", "--n", "40"]).status.code(), Some(2));
}

#[test]
fn verify_trees_passes() {
    let out = bin(&["verify", "trees", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains("\"kind\":\"record\"")).count(), 11);
    assert!(text.contains("\"pass\":11"));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "regular", "--family", "cubic", "--n", "60", "--seed", "5"];
    let a = stdout(&bin(&args));
    let b = stdout(&bin(&args));
    assert_eq!(strip_wall_time(&a), strip_wall_time(&b));
    let c = stdout(&bin(&["verify", "regular", "--family", "cubic", "--n", "60", "--seed", "6"]));
    assert_ne!(strip_wall_time(&a), strip_wall_time(&c));
}

#[test]
fn csv_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.csv");
    let out = bin(&["verify", "unicyclic", "--n", "6", "--format", "csv", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&file).unwrap();
    assert!(csv.starts_with("id,status,quantity,bound,margin,detail\n"));
    assert_eq!(csv.lines().count(), 1 + 13 + 1);
}

#[test]
fn expander_and_scan() {
    let out = bin(&["verify", "expander", "--n", "6", "--C", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bin(&["counterexample-scan", "--q", "3", "--m", "1000"]);
    assert_eq!(stdout(&out).trim(), "q=3 m0=2 m_max=1000");
    let out = bin(&["counterexample-scan", "--q", "9", "--m", "1000", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().count(), 1000);
}
