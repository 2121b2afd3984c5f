use std::process::{Command, Output};

fn elicit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elicit"))
        .args(args)
        .env_remove("ELICIT_CONFIG")
        .output()
        .expect("spawn elicit")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_prints_record() {
    let out = elicit(&["solve", "--mech", "oa", "--c", "0.18", "--d", "0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["label"], "d=(D,0),e=(1,1)");
    assert_eq!(v["mechanism"], "OA");
    assert!((v["u_high"].as_f64().unwrap() - 1.156).abs() < 1e-9);
}

#[test]
fn invalid_accuracy_is_usage_error() {
    let out = elicit(&["solve", "--mech", "ea", "--a", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.4"));
}

#[test]
fn empty_range_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = elicit(&[
        "sweep",
        "--mech",
        "oa",
        "--c",
        "0.3:0.1:5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(elicit(&["solve", "--mech", "xx"]).status.code(), Some(2));
    assert_eq!(elicit(&["solve", "--mech", "oa", "--tolerance", "-1"]).status.code(), Some(2));
    assert_eq!(elicit(&["simulate", "--mech", "oa", "--e", "2,0"]).status.code(), Some(2));
    assert_eq!(elicit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("model.toml");
    std::fs::write(&cfg, "c = 0.18\nD = 0.4\n").unwrap();
    let out = elicit(&["solve", "--mech", "oa", "--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&out)["label"], "d=(D,0),e=(1,1)");
}

#[test]
fn simulation_ignores_thread_count() {
    let args = |t: &'static str| {
        [
            "simulate", "--mech", "oa", "--e", "1,1", "--samples", "150000", "--seed", "3", "--threads", t,
        ]
    };
    let one = elicit(&args("1"));
    let four = elicit(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    assert!((v["share_high"]["mean"].as_f64().unwrap() - 0.34).abs() < 0.01);
}

#[test]
fn sweep_writes_files_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = elicit(&[
        "sweep",
        "--mech",
        "ea",
        "--c",
        "0.1:0.4:4",
        "--d",
        "0.1:0.4:2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("sweep_ea.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with("mechanism,c,D,label,"));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["job"]["c_range"]["count"], 4);
    assert!(dir.path().join("region_map_ea.json").exists());
}

#[test]
fn verify_reports_each_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = elicit(&[
        "verify",
        "--samples",
        "5000",
        "--resolution",
        "10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("statistical power"));
}
