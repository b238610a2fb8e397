use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BMI: &str = r#"{"box": [[0,200],[0,250]], "protected_index": 1, "boundary": "0.003 * x2^2", "rho": 0.1}"#;

fn nonstoch(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonstoch")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = nonstoch(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fail(dir: &Path, args: &[&str]) -> String {
    let out = nonstoch(dir, args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bmi.json"), BMI).unwrap();
    dir
}

#[test]
fn sanitize_writes_table_and_report() {
    let dir = workdir();
    let p = dir.path();
    ok(p, &["fixture", "--output", "fix.csv"]);
    ok(p, &["sanitize", "--config", "bmi.json", "--input", "fix.csv", "--output", "san.csv"]);
    let report: Value = serde_json::from_slice(&std::fs::read(p.join("san.csv.report.json")).unwrap()).unwrap();
    assert_eq!(report["rows_total"], 1010);
    assert_eq!(report["rho"], 0.1);
    assert!(report["max_perturbation"].as_f64().unwrap() <= 10.0);
    assert!(report["rows_modified"].as_u64().unwrap() > 0);
    let eps = report["epsilon"].as_f64().unwrap();
    assert!(eps > 0.0 && eps < 1.0);

    // --rho overrides the config and --report moves the report.
    ok(p, &["sanitize", "--config", "bmi.json", "--input", "fix.csv", "--output", "s2.csv", "--rho", "1000", "--report", "r.json"]);
    assert_eq!(std::fs::read(p.join("s2.csv")).unwrap(), std::fs::read(p.join("fix.csv")).unwrap());
    assert!(p.join("r.json").exists());
}

#[test]
fn sanitize_failures_write_nothing() {
    let dir = workdir();
    let p = dir.path();
    let err = fail(p, &["sanitize", "--config", "bmi.json", "--input", "absent.csv", "--output", "out.csv"]);
    assert!(err.contains("absent.csv"), "{err}");
    assert!(!p.join("out.csv").exists() && !p.join("out.csv.report.json").exists());

    std::fs::write(p.join("norho.json"), r#"{"box": [[0,200],[0,250]], "protected_index": 1, "boundary": "0.003 * x2^2"}"#)
        .unwrap();
    ok(p, &["fixture", "--output", "fix.csv", "--rows", "20"]);
    let err = fail(p, &["sanitize", "--config", "norho.json", "--input", "fix.csv", "--output", "out.csv"]);
    assert!(err.contains("rho"), "{err}");
    assert!(!p.join("out.csv").exists());

    let err = fail(p, &["sanitize", "--config", "bmi.json", "--input", "fix.csv", "--output", "out.csv", "--columns", "Mass:1,Height:2"]);
    assert!(err.contains("Mass"), "{err}");
}

#[test]
fn sweep_rows_and_validation() {
    let dir = workdir();
    let p = dir.path();
    let one = ok(p, &["sweep", "--config", "bmi.json", "--rho", "2"]);
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(lines[0], "rho,epsilon,strip_measure,err_estimate,epsilon_times_rho");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("2.0,"));

    ok(p, &["sweep", "--config", "bmi.json", "--rho-range", "0.01:1000:30:log", "--output", "sweep.csv"]);
    let text = std::fs::read_to_string(p.join("sweep.csv")).unwrap();
    let eps: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(eps.len(), 30);
    assert!(eps.windows(2).all(|w| w[1] < w[0]));

    for bad in ["0", "-1", "1,0.5,-2"] {
        let err = fail(p, &["sweep", "--config", "bmi.json", "--rho", bad]);
        assert!(err.contains("rho"), "{err}");
    }
}

#[test]
fn test_subcommand_reports() {
    let dir = workdir();
    let p = dir.path();
    std::fs::write(
        p.join("height.json"),
        r#"{"null": {"dim": 1, "parts": [[[90, 160]]]}, "alt": {"dim": 1, "parts": [[[140, 260]]]}}"#,
    )
    .unwrap();
    let v: Value = serde_json::from_str(&ok(p, &["test", "--config", "height.json"])).unwrap();
    assert_eq!(v["kind"], "sets");
    assert_eq!(v["performance"].as_f64().unwrap(), 150f64.ln());
    assert!((v["normalized"].as_f64().unwrap() + 0.1251).abs() < 1e-4);

    std::fs::write(
        p.join("same.json"),
        r#"{"null": {"dim": 1, "parts": [[[90, 160]]]}, "alt": {"dim": 1, "parts": [[[90, 160]]]}}"#,
    )
    .unwrap();
    let v: Value = serde_json::from_str(&ok(p, &["test", "--config", "same.json"])).unwrap();
    assert_eq!(v["normalized"], "-inf");

    std::fs::write(
        p.join("world.json"),
        r#"{"world": {"omega": [1,2,3,4,5,6], "X": [1,2,3,0,1,2], "Y": [0,0,1,1,0,0], "H": ["p0","p0","p1","p0","p0","p0"]}}"#,
    )
    .unwrap();
    ok(p, &["test", "--input", "world.json", "--output", "world_report.json"]);
    let v: Value = serde_json::from_slice(&std::fs::read(p.join("world_report.json")).unwrap()).unwrap();
    assert_eq!(v["kind"], "world");
    assert_eq!(v["brute_force"]["consistent_attains_optimum"], true);

    std::fs::write(p.join("bad.json"), r#"{"null": {"dim": 1, "parts": []}}"#).unwrap();
    fail(p, &["test", "--config", "bad.json"]);
}

#[test]
fn metrics_files() {
    let dir = workdir();
    let p = dir.path();
    ok(p, &["fixture", "--output", "fix.csv", "--seed", "3"]);
    ok(p, &["metrics", "--config", "bmi.json", "--input", "fix.csv", "--output", "m", "--rho", "0.05,1,1e9"]);
    let m = p.join("m");
    for f in ["histogram_original.csv", "histogram_rho_000.csv", "histogram_rho_002.csv", "metrics.json"] {
        assert!(m.join(f).exists(), "{f}");
    }
    let hist = std::fs::read_to_string(m.join("histogram_original.csv")).unwrap();
    assert!(hist.starts_with("xbin,ybin,count\n"));
    let curve = std::fs::read_to_string(m.join("utility_curve.csv")).unwrap();
    let rows: Vec<Vec<f64>> =
        curve.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[2] >= 0.0));
    assert_eq!((rows[2][1], rows[2][2]), (0.0, 0.0));
    let json: Value = serde_json::from_slice(&std::fs::read(m.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(json[0]["bins"], serde_json::json!([50, 50]));

    let err = fail(p, &["metrics", "--config", "bmi.json", "--input", "fix.csv", "--output", "m2", "--rho", ""]);
    assert!(err.contains("empty"), "{err}");
    assert!(!p.join("m2").join("utility_curve.csv").exists());
}

#[test]
fn fixture_is_seeded() {
    let dir = workdir();
    let p = dir.path();
    ok(p, &["fixture", "--output", "a.csv", "--seed", "7"]);
    ok(p, &["fixture", "--output", "b.csv", "--seed", "7"]);
    ok(p, &["fixture", "--output", "c.csv", "--seed", "8"]);
    let read = |f: &str| std::fs::read(p.join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
    assert_eq!(String::from_utf8(read("a.csv")).unwrap().lines().count(), 1011);
}
