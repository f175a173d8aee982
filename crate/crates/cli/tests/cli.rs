use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galaxy-contagion")).args(args).arg("--out").arg(out).output().unwrap()
}

fn csv_body(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# "), "{} lacks a units line", path.display());
    lines.map(str::to_string).collect()
}

#[test]
fn calibrate_writes_headline_and_tiers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["calibrate"], dir.path());
    assert!(out.status.success());
    let headline = csv_body(&dir.path().join("headline.csv"));
    assert_eq!(headline[0], "metric,value");
    assert!(headline.contains(&"outstanding_debt,5.1550000000000000e2".to_string()));
    assert!(headline.contains(&"bank_count,1.7501000000000000e4".to_string()));
    let tiers = csv_body(&dir.path().join("network_summary.csv"));
    assert_eq!(tiers.len(), 4);
    assert!(tiers[1].starts_with("central,1,"));
}

#[test]
fn simulate_with_insurance_reports_both_settings() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--insurance", "--scenarios", "200", "--seed", "9"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let losses = csv_body(&dir.path().join("losses.csv"));
    assert_eq!(losses.len(), 201);
    assert!(losses[1].starts_with("0,"));
    let summary = csv_body(&dir.path().join("summary.csv"));
    assert_eq!(summary[0], "metric,no_insurance,insurance");
    let hist = csv_body(&dir.path().join("histogram.csv"));
    assert_eq!(hist.len(), 101);
    let counted: usize = hist[1..].iter().map(|r| r.split(',').nth(2).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(counted, 200);
}

#[test]
fn bailout_flags_reduce_losses() {
    let base = tempfile::tempdir().unwrap();
    let saved = tempfile::tempdir().unwrap();
    assert!(run(&["simulate", "--scenarios", "100"], base.path()).status.success());
    assert!(run(&["simulate", "--scenarios", "100", "--bailout-big", "0.3"], saved.path()).status.success());
    let loss = |p: &Path| -> Vec<f64> {
        csv_body(&p.join("losses.csv"))[1..].iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect()
    };
    for (a, b) in loss(base.path()).iter().zip(loss(saved.path())) {
        assert!(b <= *a);
    }
}

#[test]
fn frontier_with_gaps_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["frontier", "--criterion", "expectation", "--scenarios", "200"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("expectation"));
    let minima = csv_body(&dir.path().join("minima.csv"));
    assert_eq!(minima.len(), 2);
    assert!(dir.path().join("frontier.csv").exists());
}

#[test]
fn trivially_satisfied_frontier_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"loss": {"threshold_fraction": 0.99}, "grid": {"values": [0.0, 0.1]}}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["frontier", "--scenarios", "100", "--config", config.to_str().unwrap()], &out_dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let points = csv_body(&out_dir.join("frontier.csv"));
    assert_eq!(points.len(), 7);
    assert!(points[1..].iter().all(|r| r.split(',').nth(2) == Some("0.0000000000000000e0")));
}

#[test]
fn bad_config_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, "{\n  \"shock\": {\"correlation\": \"high\"}\n}").unwrap();
    let out = run(&["calibrate", "--config", config.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("shock.correlation") && err.contains("line 2"), "{err}");
}

#[test]
fn out_of_range_parameter_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"shock": {"correlation": 1.5}}"#).unwrap();
    let out = run(&["calibrate", "--config", config.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["calibrate", "--config", "/nonexistent/config.json"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = run(&["calibrate"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn populated_output_directory_is_not_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("keep.txt"), "x").unwrap();
    assert!(run(&["calibrate"], dir.path()).status.success());
    assert!(!dir.path().join("headline.csv").exists());
    let runs: Vec<_> = std::fs::read_dir(dir.path()).unwrap().filter_map(|e| e.ok()).collect();
    assert!(runs.iter().any(|e| e.file_name().to_string_lossy().starts_with("run-")));
    assert!(Command::new(env!("CARGO_BIN_EXE_galaxy-contagion"))
        .args(["calibrate", "--overwrite", "--out"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status
        .success());
    assert!(dir.path().join("headline.csv").exists());
}

#[test]
fn thread_count_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run(&["simulate", "--scenarios", "300", "--threads", "1"], a.path()).status.success());
    assert!(run(&["simulate", "--scenarios", "300", "--threads", "3"], b.path()).status.success());
    assert_eq!(std::fs::read(a.path().join("losses.csv")).unwrap(), std::fs::read(b.path().join("losses.csv")).unwrap());
}
