use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pml"))
        .args(args)
        .env("PML_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn sha256_of(path: &Path) -> String {
    pml::manifest::sha256_hex(&std::fs::read(path).unwrap())
}

#[test]
fn project_matches_circle_closed_form() {
    let out = pml(&["project", "--family", "circle", "--delta", "0.3", "--x", "0.5", "--y", "0.5"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    // center (-0.3, 0), radius 1.3
    let (dx, dy) = (0.8, 0.5);
    let k = 1.3 / f64::hypot(dx, dy);
    assert!((v["px"].as_f64().unwrap() - (-0.3 + k * dx)).abs() < 1e-8);
    assert!((v["py"].as_f64().unwrap() - k * dy).abs() < 1e-8);
    assert_eq!(v["multiplicity"].as_u64(), Some(1));
}

#[test]
fn project_inner_axis_point_sticks_to_vertex() {
    let out = pml(&["project", "--family", "poly", "--gamma", "2", "--x", "0.5", "--y", "0"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["t"].as_f64(), Some(0.0));
    assert_eq!(v["px"].as_f64(), Some(1.0));
    assert_eq!(v["py"].as_f64(), Some(0.0));
}

#[test]
fn bad_flags_exit_2() {
    let out = pml(&["project", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pml(&["simulate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pml(&["families", "--gamma", "-1"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn invalid_parameter_names_the_flag() {
    let out = pml(&["simulate", "--sigma", "0", "--reps", "10", "--n", "4"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--sigma"), "{err}");
}

#[test]
fn failing_verification_exits_1() {
    // 20 replicates cannot resolve the limit law to 0.02
    let out = pml(&[
        "verify", "theorem1", "--family", "poly", "--gamma", "2", "--reps", "20", "--n", "16",
        "--max-doublings", "0", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("false"));
}

#[test]
fn curve_sample_row_count_and_symmetry() {
    let out = pml(&["curve", "sample", "--family", "log", "--points", "1000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "t,x,y,r,speed,arclength");
    assert_eq!(lines.len(), 1001);
    let t = |l: &str| l.split(',').next().unwrap().parse::<f64>().unwrap();
    assert_eq!(t(lines[1]), -t(lines[1000]));
}

#[test]
fn manifest_digest_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let out = pml(&[
        "simulate", "--family", "exp", "--n", "50", "--reps", "200", "--seed", "9", "--out",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest_path = dir.path().join("a.csv.manifest.json");
    let manifest: Value = serde_json::from_slice(&std::fs::read(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "simulate");
    assert_eq!(manifest["seed"].as_u64(), Some(9));
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap(), sha256_of(&first));

    let second = dir.path().join("b.csv");
    let out = pml(&[
        "--config",
        manifest_path.to_str().unwrap(),
        "simulate",
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family": "poly", "gamma": 2, "n": 10, "reps": 5, "seed": 1, "unknown": 3}"#).unwrap();
    let out = pml(&["--config", cfg.to_str().unwrap(), "simulate", "--reps", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("# gamma: 2"), "{text}");
    assert!(text.contains("# n: 10"), "{text}");
    assert_eq!(data_lines(&text).len(), 8);
}

#[test]
fn stdout_is_deterministic() {
    let args = ["simulate", "--family", "log", "--n", "30", "--reps", "100", "--seed", "5"];
    assert_eq!(pml(&args).stdout, pml(&args).stdout);
}
