use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use halfspin_verify::report::{Status, SuiteReport};

const MAIN: &str = r#"{"tower":{"m1":"2","m2":["-1"]},"n":6,"k":1,"delta":["0","1"],
"permutation":{"a":1,"r":4},"suites":["all"],"seed":7,"trials":10}"#;

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn verify(config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .arg("--config")
        .arg(config)
        .args(extra)
        .output()
        .unwrap()
}

fn reports(out: &Output) -> Vec<SuiteReport> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn main_config_passes_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "main.json", MAIN);
    let out = verify(&cfg, &["--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reps = reports(&out);
    let names: Vec<_> = reps.iter().map(|r| r.suite.as_str()).collect();
    assert_eq!(
        names,
        ["clifford", "forms", "lie", "spin", "star", "L", "rationality", "real", "weights"]
    );
    assert!(reps.iter().all(|r| r.status == Status::Pass && r.checks_run > 0));
}

#[test]
fn odd_n_with_l_suite_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "odd.json",
        r#"{"tower":{"m2":["-1"]},"n":5,"k":1,"delta":["-1"],"suites":["L"]}"#,
    );
    let out = verify(&cfg, &[]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("n must be even"), "{err}");
    assert!(err.contains("`n`"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn undecided_norm_gives_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "unknown.json",
        r#"{"tower":{"m1":"5","m2":["-1"]},"n":2,"k":1,"delta":["-11"],"suites":["rationality","forms"],"seed":1,"trials":5}"#,
    );
    let out = verify(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let reps = reports(&out);
    assert!(reps.iter().all(|r| r.status == Status::Unknown && r.counterexample.is_none()));
}

#[test]
fn bad_configs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"tower":{"m2":["1"]},"n":2,"k":1,"delta":["1"]}"#, "`tower`"),
        (r#"{"tower":{"m2":["-1"]},"n":2,"k":3,"delta":["1"]}"#, "`k`"),
        (r#"{"tower":{"m2":["-1"]},"n":2,"k":1,"delta":["1/0"]}"#, "`delta`"),
        (r#"{"tower":{"m2":["-1"]},"n":2,"k":1,"delta":["1"],"suites":["nope"]}"#, "`suites[0]`"),
        (r#"{"tower":{"m2":["-1"]},"n":2,"delta":["1"]}"#, "`k`"),
        ("not json", "`<root>`"),
    ];
    for (i, (body, field)) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{i}.json"), body);
        let out = verify(&cfg, &[]);
        assert_eq!(out.status.code(), Some(3), "{body}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(field), "{body}: {err}");
    }
    let out = verify(&dir.path().join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn same_config_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "small.json",
        r#"{"tower":{"m1":"3","m2":["-2","1"]},"n":4,"k":2,"delta":["-1","1"],"suites":["all"],"seed":99,"trials":8}"#,
    );
    let a = verify(&cfg, &[]);
    let b = verify(&cfg, &[]);
    assert_eq!(a.status.code(), b.status.code());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = verify(&cfg, &["--seed", "99"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn reports_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "main.json", MAIN);
    let out = verify(&cfg, &["--suite", "star", "--suite", "weights", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        let rep: SuiteReport = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&rep).unwrap(), line);
    }
    let names: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<SuiteReport>(l).unwrap().suite)
        .collect();
    assert_eq!(names, ["star", "weights"]);
}

#[test]
fn text_output_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "main.json", MAIN);
    let out = verify(&cfg, &["--text", "--suite", "real"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("SoStar(12)"), "{text}");
    assert!(text.contains("SoPq(10, 2)"), "{text}");
    assert!(text.trim_end().ends_with("exit 0"), "{text}");
    let out = verify(&cfg, &["--suite", "weights", "--timing"]);
    assert!(reports(&out)[0].elapsed.is_some());
}

#[test]
fn fallback_when_parities_differ() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n4.json",
        r#"{"tower":{"m1":"2","m2":["-1"]},"n":4,"k":1,"delta":["0","1"],"suites":["rationality"]}"#,
    );
    let out = verify(&cfg, &[]);
    let rep = &reports(&out)[0];
    assert!(rep.detail.iter().any(|d| d.contains("pipeline not applicable")), "{rep:?}");
    assert_ne!(rep.status, Status::Fail);
}
