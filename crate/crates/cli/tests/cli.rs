use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dissres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dissres")).args(args).output().expect("binary runs")
}

fn golden(name: &str, args: &[&str]) {
    let out = dissres(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let expected = fs::read(&path).unwrap_or_else(|_| panic!("missing {path:?}, rerun with UPDATE_GOLDEN=1"));
    assert!(out.stdout == expected, "{name} differs from golden file");
}

#[test]
fn golden_transmission_csv() {
    golden("transmission.csv", &["transmission", "--epsilon-range", "0.5:2.5:9", "--gamma-star", "5e-3"]);
}

#[test]
fn golden_transmission_json() {
    golden(
        "transmission.json",
        &["transmission", "--epsilon-range", "1.2:1.6:3", "--gamma-star", "1e-3", "--format", "json", "--no-timestamp"],
    );
}

#[test]
fn golden_traversal_csv() {
    golden("traversal.csv", &["traversal", "--epsilon-range", "1.1:4.1:7"]);
}

#[test]
fn golden_cumulative_csv() {
    golden("cumulative.csv", &["cumulative", "--epsilon", "1.3", "--tau-range", "0:20:5", "--gamma-star", "5e-3"]);
}

#[test]
fn golden_resonances_csv() {
    golden("resonances.csv", &["resonances", "--d-over-lambda0", "5", "--n-max", "3"]);
}

#[test]
fn header_layout() {
    let out = dissres(&["cumulative", "--epsilon", "1.3", "--tau-range", "0:1:2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "tau_star,g0");
    let out = dissres(&["transmission", "--epsilon-range", "1:2:2", "--gamma-star", "1e-3", "--gamma-star", "5e-3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "epsilon,g0,g0.001,g0.005");
}

#[test]
fn json_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = dissres(&[
        "transmission",
        "--epsilon-range",
        "1:2:3",
        "--gamma-star",
        "5e-3",
        "--tol",
        "1e-7",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["params"]["tol"], 1e-7);
    assert_eq!(v["params"]["d_over_lambda0"], 5.0);
    assert_eq!(v["columns"], serde_json::json!(["epsilon", "g0", "g0.005"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["error_estimates"].as_array().unwrap().len(), 3);
    assert!(v["generated_at"].as_u64().is_some());
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["transmission", "--epsilon-range", "1.1:1.5:6", "--gamma-star", "5e-3"];
    let one = dissres(&[&args[..], &["--threads", "1"]].concat());
    let four = dissres(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["transmission", "--epsilon-range", "2:1:5"][..],
        &["transmission", "--epsilon-range", "0.5:2:3", "--tol", "0.1"],
        &["traversal", "--epsilon-range", "0.5:2:3"],
        &["transmission"],
        &["cumulative", "--tau-range", "0:1:3"],
        &["figure3", "--gamma-star", "-1"],
        &["figure3", "--threads", "0"],
        &["figure3", "--format", "xml"],
        &["resonances", "--d-over-lambda0", "0"],
    ] {
        let out = dissres(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_3_with_partial_output() {
    // a wide barrier pushes the damped distribution past the default window
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.csv");
    let out = dissres(&[
        "traversal",
        "--epsilon-range",
        "1.1:1.5:3",
        "--d-over-lambda0",
        "20",
        "--gamma-star",
        "5e-3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("NaN"));
}
