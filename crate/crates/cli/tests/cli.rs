use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

const DESK: [&str; 10] = ["--L", "2", "--l", "1", "--s", "1", "--v", "0.5", "--c", "1"];

fn shadowkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowkin"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(args: Vec<String>) -> Output {
    shadowkin(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn path(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn report_json_and_csv_carry_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("r.json");
    let csv_path = dir.path().join("r.csv");
    let a = run(with(&["report"], &DESK)
        .into_iter()
        .chain(["--out".into(), path(&json_path)])
        .collect());
    assert_eq!(code(&a), 0);
    assert!(
        stdout(&a).contains("v_avg              = 0.585786"),
        "{}",
        stdout(&a)
    );
    let b = run(with(&["report"], &DESK)
        .into_iter()
        .chain([
            "--out".into(),
            path(&csv_path),
            "--format".into(),
            "csv".into(),
        ])
        .collect());
    assert_eq!(code(&b), 0);

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 15);
    for (key, cell) in header.iter().zip(&row) {
        let value = doc["kinematics"]
            .get(*key)
            .or_else(|| doc["certificate"].get(*key))
            .unwrap();
        match value {
            Value::Number(n) => {
                assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap(), "{key}")
            }
            other => assert_eq!(other.to_string(), *cell, "{key}"),
        }
    }
    assert_eq!(
        doc["kinematics"]["v_avg"].as_f64().unwrap(),
        2.0 / (2.0 + 2f64.sqrt())
    );
}

#[test]
fn report_invalid_scene_names_field_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = shadowkin(&[
        "report",
        "--L",
        "2",
        "--l",
        "1",
        "--s",
        "1",
        "--v",
        "1",
        "--c",
        "1",
        "--out",
        &path(&out),
    ]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("v must be < c"));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let res = shadowkin(&["report", "--L", "2", "--l", "3", "--s", "1", "--v", "0.5"]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("l must be < L"));
    let res = shadowkin(&["report", "--L", "2", "--s", "1", "--v", "0.5"]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("parameter l"));
}

#[test]
fn report_unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.json");
    let res = run(with(&["report"], &DESK)
        .into_iter()
        .chain(["--out".into(), path(&out)])
        .collect());
    assert_eq!(code(&res), 1);
}

#[test]
fn report_sun_latency() {
    let res = shadowkin(&[
        "report", "--L", "1.5e11", "--l", "1000", "--s", "1", "--v", "10",
    ]);
    assert_eq!(code(&res), 0);
    let doc: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["kinematics"]["t1"].as_f64(), Some(500.0));
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"scene": {"L": 2, "l": 1, "s": 1, "v": 0.5, "c": 1}, "format": "csv", "dominance_ratio": 2}"#).unwrap();
    let res = shadowkin(&[
        "report",
        "--config",
        &path(&cfg),
        "--format",
        "json",
        "--v",
        "0.25",
    ]);
    assert_eq!(code(&res), 0);
    let doc: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["kinematics"]["t"].as_f64(), Some(4.0));

    std::fs::write(
        &cfg,
        r#"{"scene": {"L": 2, "l": 1, "s": 1, "v": 0.5}, "grid": 3}"#,
    )
    .unwrap();
    assert_eq!(code(&shadowkin(&["report", "--config", &path(&cfg)])), 2);
}

fn measured(text: &str, label: &str) -> Option<f64> {
    let line = text.lines().find(|l| l.starts_with(label)).unwrap();
    let rest = line.split("measured ").nth(1).unwrap();
    rest.split_whitespace().next().unwrap().parse().ok()
}

#[test]
fn simulate_writes_both_files_and_reports_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tl.csv");
    let res = run(with(&["simulate"], &DESK)
        .into_iter()
        .chain(["--dt".into(), "0.01".into(), "--out".into(), path(&out)])
        .collect());
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let text = stdout(&res);
    assert_eq!(measured(&text, "onset"), None);
    let stop = measured(&text, "stop").unwrap();
    assert!((stop - (2.0 + 2f64.sqrt())).abs() <= 0.01);
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("Y,T,state\n"));
    assert!(std::fs::read_to_string(dir.path().join("tl_worldline.csv"))
        .unwrap()
        .starts_with("T,Y\n"));

    let res = run(with(&["simulate"], &DESK)
        .into_iter()
        .chain(["--dt", "0.001", "--convention", "steady-beam", "--out"].map(String::from))
        .chain([path(&out)])
        .collect());
    assert_eq!(code(&res), 0);
    let onset = measured(&stdout(&res), "onset").unwrap();
    assert!((onset - 1.0).abs() <= 1e-3, "{onset}");
}

#[test]
fn simulate_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tl.csv");
    let go = |extra: &[&str]| {
        run(with(&["simulate"], &DESK)
            .into_iter()
            .chain(extra.iter().map(|s| s.to_string()))
            .chain(["--out".into(), path(&out)])
            .collect())
    };
    assert_eq!(code(&go(&["--dt", "0"])), 2);
    assert_eq!(code(&go(&["--convention", "sideways"])), 2);
    assert_eq!(code(&go(&["--dt", "1e-6", "--dy", "1e-6"])), 3);
    assert_eq!(
        code(&go(&[
            "--dt",
            "0.01",
            "--eps",
            "1e-7",
            "--convention",
            "steady-beam"
        ])),
        4
    );
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_is_deterministic_and_reports_counterexamples() {
    let a = shadowkin(&["verify", "--trials", "1", "--seed", "9"]);
    let b = shadowkin(&["verify", "--trials", "1", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let bad = shadowkin(&["verify", "--trials", "50", "--seed", "1", "--inject-fault"]);
    assert_eq!(code(&bad), 5);
    let ce: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(ce["check"], "subluminal");
    assert!(ce["scene"]["L"].as_f64().unwrap() > ce["scene"]["l"].as_f64().unwrap());

    assert_eq!(code(&shadowkin(&["verify", "--trials", "0"])), 2);
}

#[test]
fn signal_examples() {
    let res = shadowkin(&[
        "signal",
        "--l",
        "1",
        "--s",
        "2",
        "--L",
        "150",
        "--v",
        "0.01",
        "--natural-units",
    ]);
    assert_eq!(code(&res), 0);
    let doc: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["verdict"], "Feasible");
    assert!((doc["v_dd_min"].as_f64().unwrap() - 0.74507).abs() < 1e-4);

    let res = shadowkin(&[
        "signal", "--l", "2", "--s", "1", "--L", "250", "--v", "0.01", "--c", "1",
    ]);
    let doc: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["verdict"], "Infeasible");
}

#[test]
fn signal_sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw.csv");
    let sweep = |l: &str, steps: &str| {
        shadowkin(&[
            "signal",
            "sweep",
            "--l-range",
            l,
            "--s-range",
            "0.5:4",
            "--L-range",
            "50:400",
            "--steps",
            steps,
            "--v",
            "0.01",
            "--c",
            "1",
            "--out",
            &path(&out),
        ])
    };
    let res = sweep("0.5:4", "6");
    assert_eq!(code(&res), 0);
    let summary: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(summary["points"], 216);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 217);

    // Occluder too far for the threshold anywhere on the grid.
    let res = sweep("5:8", "4");
    assert_eq!(code(&res), 0);
    let summary: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(summary["message"], "no feasible point");

    assert_eq!(code(&sweep("4", "4")), 2);
    assert_eq!(code(&sweep("0.5:4", "100000")), 3);
}
