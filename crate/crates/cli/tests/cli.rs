use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-orbit")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn axioms_report_envelope() {
    let out = run(&["--algebra", "rn:3", "axioms"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "jordan-orbit/1");
    assert_eq!(v["command"], "axioms");
    assert_eq!(v["algebra"], "rn:3");
    assert_eq!(v["seed"], 0);
}

#[test]
fn unknown_algebra_is_a_usage_error() {
    let out = run(&["--algebra", "bogus", "axioms"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown algebra"));
}

#[test]
fn malformed_points_are_usage_errors() {
    assert_eq!(run(&["--algebra", "rn:3", "metric", "vec:1,2"]).status.code(), Some(2));
    assert_eq!(run(&["--algebra", "rn:3", "metric", "vec:1,x,2"]).status.code(), Some(2));
    assert_eq!(run(&["--algebra", "rn:3", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn orbit_of_a_mixed_signature_point() {
    let out = run(&["--algebra", "herm:2:real", "orbit", "diag:1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["report"];
    assert_eq!(r["class"]["cone_status"], "exterior");
    assert_eq!(r["class"]["signature"], serde_json::json!([1, 1]));
    assert_eq!(r["regular_point"]["regular"], false);
    let t = &r["tangent_dims"];
    assert_eq!((t["dim_lx"].as_u64(), t["dim_der"].as_u64(), t["dim_orbit"].as_u64()), (Some(2), Some(1), Some(3)));
}

#[test]
fn componentwise_metric() {
    let out = run(&["--algebra", "rn:3", "metric", "vec:1,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    let g = &json(&out)["report"]["coordinate_gram"];
    assert_eq!(g[0][0].as_f64(), Some(1.0));
    assert_eq!(g[1][1].as_f64(), Some(0.5));
    assert_eq!(g[2][2].as_f64(), Some(0.25));
    assert_eq!(g[0][1].as_f64(), Some(0.0));
}

#[test]
fn metric_at_non_regular_point_fails() {
    let out = run(&["--algebra", "herm:2:real", "metric", "diag:1,-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not regular"));
}

#[test]
fn natural_gradient_direction() {
    let out = run(&["--algebra", "rn:3", "natgrad", "vec:1,2,3", "vec:1,-1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["direction"], serde_json::json!([1.0, -2.0, 6.0]));
}

#[test]
fn involutivity_verdicts() {
    let bad = run(&["--algebra", "herm:2:real", "involutive", "diag:1,-1"]);
    assert_eq!(json(&bad)["report"]["involutive"], false);
    let good = run(&["--algebra", "lie:so3", "involutive", "vec:0.3,-1,0.2"]);
    assert_eq!(json(&good)["report"]["involutive"], true);
}

#[test]
fn pole_sweep_csv() {
    let out = run(&["--algebra", "herm:2:real", "sweep", "pole"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,max_entry,scaled"));
    for line in lines {
        let scaled: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((scaled - 2.0).abs() < 0.1, "{line}");
    }
}

#[test]
fn verify_for_one_algebra_as_csv() {
    let out = run(&["--algebra", "herm:2:complex", "verify", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("id,name,anchor,passed,measured,tolerance,details\n"));
    assert!(text.lines().count() > 2);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["--algebra", "spin:3", "--out", path.to_str().unwrap(), "spectral", "vec:1,0.5,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "spectral");
    assert_eq!(v["report"]["coefficients"], serde_json::json!([1.5, 0.5]));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = run(&["--algebra", "herm:3:complex", "--seed", "5", "spectral", "rand"]);
    let b = run(&["--algebra", "herm:3:complex", "--seed", "5", "spectral", "rand"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--algebra", "herm:3:complex", "--seed", "6", "spectral", "rand"]);
    assert_ne!(a.stdout, c.stdout);
}
