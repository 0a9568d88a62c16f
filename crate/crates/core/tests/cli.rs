use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use huipm::cli::{EXIT_DATA, EXIT_OK, EXIT_USAGE};
use huipm::fixtures::{RUNNING_EXAMPLE_TSV, RUNNING_EXAMPLE_UTILITIES_TSV};

fn huipm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_huipm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn workspace() -> (TempDir, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.tsv");
    let utils = dir.path().join("utils.tsv");
    fs::write(&data, RUNNING_EXAMPLE_TSV).unwrap();
    fs::write(&utils, RUNNING_EXAMPLE_UTILITIES_TSV).unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    (dir, s(&data), s(&utils))
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn find<'a>(report: &'a Value, pattern: &str) -> Option<&'a Value> {
    report["patterns"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["pattern"].to_string().contains(pattern))
}

#[test]
fn mine_running_example() {
    let (_dir, data, utils) = workspace();
    let out = huipm(&[
        "mine",
        "--data",
        &data,
        "--utilities",
        &utils,
        "--xi",
        "22",
        "-K",
        "3",
        "-Z",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{out:?}");
    let r = json(&out);
    assert_eq!(r["dataset"]["utility"], 134.0);
    assert_eq!(r["dataset"]["num_sequences"], 4);
    let ab = r["patterns"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["pattern"] == serde_json::json!([["A"], ["B"]]))
        .expect("<{A}{B}> reaches 22");
    assert_eq!(ab["umax"], 22.0);
    assert!(find(&r, "F").is_some());
    assert!(r["runs"][0].get("elapsed_ms").is_none());
}

#[test]
fn reports_are_reproducible() {
    let (_dir, data, utils) = workspace();
    let args = [
        "mine",
        "--data",
        &data,
        "--utilities",
        &utils,
        "--xi",
        "0.1",
        "--xi-mode",
        "relative",
        "--strategy",
        "none,ldc,pdc",
    ];
    let a = huipm(&args);
    let b = huipm(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let c = huipm(&seq_args);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let r = json(&a);
    assert_eq!(r["strategies_agree"], true);
    assert_eq!(r["config"]["xi_abs"], 13.4);
    assert_eq!(r["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn benchmark_reports_timings() {
    let (_dir, data, utils) = workspace();
    let out = huipm(&[
        "mine",
        "--data",
        &data,
        "--utilities",
        &utils,
        "--xi",
        "0.25",
        "--xi-mode",
        "relative",
        "--strategy",
        "ldc,pdc",
        "--benchmark",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r = json(&out);
    assert_eq!(r["config"]["xi_abs"], 33.5);
    for run in r["runs"].as_array().unwrap() {
        assert!(run["elapsed_ms"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn table_output_to_file() {
    let (dir, data, utils) = workspace();
    let target = dir.path().join("report.txt");
    let out = huipm(&[
        "mine",
        "--data",
        &data,
        "--utilities",
        &utils,
        "--xi",
        "40",
        "--format",
        "table",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stdout.is_empty());
    let table = fs::read_to_string(target).unwrap();
    assert!(table.contains("utility 134"));
    assert!(table.lines().any(|l| l.starts_with("pdc")));
}

#[test]
fn missing_utility_is_a_data_error() {
    let (_dir, data, _) = workspace();
    let out = huipm(&["mine", "--data", &data, "--xi", "1"]);
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`A`"));

    let ok = huipm(&[
        "mine",
        "--data",
        &data,
        "--xi",
        "1",
        "--default-utility",
        "1",
    ]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.tsv");
    fs::write(&data, "1\tA\t0\t5\n1\tB\t7\t3\n").unwrap();
    let out = huipm(&[
        "mine",
        "--data",
        data.to_str().unwrap(),
        "--xi",
        "1",
        "--default-utility",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = huipm(&["mine", "--data", "/nonexistent/x.tsv", "--xi", "1"]);
    assert_eq!(missing.status.code(), Some(EXIT_DATA));
}

#[test]
fn usage_errors() {
    let (_dir, data, utils) = workspace();
    for args in [
        vec![
            "mine",
            "--data",
            &data,
            "--utilities",
            &utils,
            "--xi",
            "2",
            "--xi-mode",
            "relative",
        ],
        vec![
            "mine",
            "--data",
            &data,
            "--utilities",
            &utils,
            "--xi",
            "1",
            "-K",
            "0",
        ],
        vec![
            "mine",
            "--data",
            &data,
            "--utilities",
            &utils,
            "--xi",
            "1",
            "--strategy",
            "fast",
        ],
        vec!["mine", "--xi", "1"],
        vec!["frobnicate"],
    ] {
        let out = huipm(&args);
        assert_eq!(out.status.code(), Some(EXIT_USAGE), "{args:?}: {out:?}");
    }
    assert_eq!(huipm(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn gen_is_seeded_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let (a, au, b) = (p("a.tsv"), p("a_u.tsv"), p("b.tsv"));
    let gen = |out: &str, utils: Option<&str>| {
        let mut args = vec!["gen", "--seed", "9", "--sequences", "12", "--output", out];
        if let Some(u) = utils {
            args.extend(["--utilities-out", u]);
        }
        huipm(&args)
    };
    assert_eq!(gen(&a, Some(&au)).status.code(), Some(EXIT_OK));
    assert_eq!(gen(&b, None).status.code(), Some(EXIT_OK));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let out = huipm(&[
        "mine",
        "--data",
        &a,
        "--utilities",
        &au,
        "--xi",
        "0.2",
        "--xi-mode",
        "relative",
        "--strategy",
        "none,ldc,pdc",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r = json(&out);
    assert_eq!(r["dataset"]["num_sequences"], 12);
    assert_eq!(r["strategies_agree"], true);
}

#[test]
fn check_passes() {
    let out = huipm(&["check", "--instances", "20"]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = huipm::cli::run(["huipm", "check", "--instances", "3"], &mut out, &mut err);
    assert_eq!(code, EXIT_OK);
    assert!(err.is_empty());
    assert!(String::from_utf8(out)
        .unwrap()
        .contains("oracle equivalence"));
}
