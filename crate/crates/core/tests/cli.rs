use std::path::PathBuf;
use std::process::{Command, Output};

fn qtorus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtorus")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn eval_examples() {
    let sc = scenario("minus_one.json");
    let cases = [
        ("t[1,0]*t[0,1]", "t[1,1]"),
        ("[D[(0,1);0,0], ad[0,1]]", "1*ad[0,1]"),
        ("[D[(1,0);0,0], ad[0,1]]", "0"),
    ];
    for (expr, want) in cases {
        let o = qtorus(&["eval", expr, "--scenario", &sc]);
        assert_eq!(o.status.code(), Some(0), "{expr}");
        assert_eq!(stdout(&o), want, "{expr}");
    }
}

#[test]
fn eval_parse_error_exits_2() {
    let o = qtorus(&["eval", "t[1,0]*", "--scenario", &scenario("minus_one.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}

#[test]
fn radf_lists_basis() {
    let o = qtorus(&["radf", &scenario("minus_one.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0 mismatches"), "{out}");
}

#[test]
fn unknown_suite_is_config_error() {
    let o = qtorus(&["verify", &scenario("identity.json"), "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/suites"));
}

#[test]
fn seed_override_changes_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let sc = scenario("minus_one.json");
    for (seed, out) in [("1", &a), ("2", &b)] {
        let o = qtorus(&["verify", &sc, "--suite", "cocycle", "--trials", "3", "--seed", seed, "--report", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(b).unwrap());
    assert!(a.contains("\"seed\": 1") && b.contains("\"seed\": 2"));
}
