use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divergence-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_the_value() {
    let o = run(&["eval", "--divergence", "euclidean", "--p", "0.2,0.2,0.6", "--q", "0.1,0.1,0.8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.06).abs() < 1e-15);
}

#[test]
fn check_exit_codes() {
    let pass = run(&["check", "dpi", "--divergence", "kl", "--n", "2", "--grid", "8", "--trials", "500"]);
    assert_eq!(pass.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&pass)).unwrap();
    assert_eq!(report["verdict"], "no_violation_found");
    assert_eq!(report["config"]["seed"], 42);

    let fail = run(&["check", "sufficiency", "--divergence", "euclidean", "--n", "3", "--trials", "300"]);
    assert_eq!(fail.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout(&fail)).unwrap();
    assert!(report["witness"]["gap"].as_f64().unwrap() > 1e-9);

    let shannon = run(&["check", "shannon", "--f", "name:half_square_minus_x", "--n", "3", "--trials", "20000"]);
    assert_eq!(shannon.status.code(), Some(3));
    let swap = run(&["check", "decomposable", "--divergence", "tv_squared", "--grid", "50"]);
    assert_eq!(swap.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["check", "dpi"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--divergence", "nope", "--p", "1,0", "--q", "1,0"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--divergence", "kl", "--p", "0.5,0.6", "--q", "0.5,0.5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "scenario", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("settings.json");
    std::fs::write(&path, r#"{"seed": 7, "trials": 99}"#).unwrap();
    let path = path.to_str().unwrap();
    let o = run(&["--show-config", "--config", path, "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["seed"].as_u64(), v["trials"].as_u64(), v["grid"].as_u64()), (Some(7), Some(5), Some(20)));

    std::fs::write(dir.path().join("bad.json"), r#"{"unknown": 1}"#).unwrap();
    let bad = dir.path().join("bad.json");
    assert_eq!(run(&["--show-config", "--config", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn generated_spec_evaluates() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    let spec = dir.path().join("spec.json");
    let o = run(&[
        "generate",
        "--h",
        "name:square",
        "--samples",
        "512",
        "--out",
        table.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&table).unwrap();
    assert_eq!(csv.lines().next(), Some("x,G,f"));
    let o = run(&["eval", "--divergence", spec.to_str().unwrap(), "--p", "0.3,0.7", "--q", "0.6,0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5 * 0.3f64.powi(2)).abs() < 1e-8);
}

#[test]
fn fits_report_representability() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fit.csv");
    let o = run(&["fit", "fdiv", "--divergence", "kl", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().next(), Some("knot,value"));
    assert_eq!(run(&["fit", "fdiv", "--divergence", "brier"]).status.code(), Some(3));
    assert_eq!(run(&["fit", "bregman", "--divergence", "brier"]).status.code(), Some(0));
}

#[test]
fn verify_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = run(&["verify", "all", "--seed", "42", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], "divergence-lab/1");
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 9);
}

#[test]
fn markdown_report_has_one_row_per_scenario() {
    let o = run(&["verify", "scenario", "bregman-f-residual", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("| `")).count(), 1);
}
