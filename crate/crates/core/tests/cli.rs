use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ricci-alpha")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn scalar_commands() {
    assert_eq!(stdout(&["alpha", "--k", "3", "--n", "3"]).trim(), "1 - 3.52e-284");
    assert_eq!(stdout(&["gamma", "--c", "2", "--eps", "2", "--n", "5"]).trim(), "5.00e-1");
    assert_eq!(stdout(&["constants", "--k", "1", "--n", "2"]).trim(), "3.84e2");
    assert!(stdout(&["--digits", "6", "delta", "--k", "3", "--n", "10"]).starts_with("2.62349e-1834"));
}

#[test]
fn beta_reports_argmax() {
    let text = stdout(&["beta", "--k", "2", "--n", "2", "--c", "1000"]);
    assert!(text.lines().any(|l| l.starts_with("argmax")), "{text}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["--format", "json", "beta", "--k", "2", "--n", "2", "--c", "1000"])).unwrap();
    assert_eq!(json["value"], "1 - 1.18e-37");
}

#[test]
fn constants_table_csv() {
    let csv = stdout(&["--format", "csv", "tables", "--table", "constants"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,n,value,flag"));
    assert!(csv.lines().any(|l| l == "1,2,3.84e2,ok"));
    assert!(csv.lines().any(|l| l.starts_with("1,6,2.52e7,")));
}

#[test]
fn audit_reports_section3_failure_without_erroring() {
    let text = stdout(&["audit", "--k", "1", "--n", "2", "--variant", "section3"]);
    assert!(text.lines().any(|l| l.starts_with("Ineq1") && l.contains("FAIL")), "{text}");
    let app = stdout(&["audit", "--k", "1", "--n", "2"]);
    assert!(!app.contains("FAIL"), "{app}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--digits", "0", "delta", "--k", "1", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--k", "0", "--n", "1"]).status.code(), Some(3));
    assert_eq!(run(&["gamma", "--c", "1", "--eps", "2", "--n", "1"]).status.code(), Some(3));
}
