//! End-to-end runs of the `sflat` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sflat")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sflat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sflat(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(sflat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        sflat(&["causal", "jplus", "--p", "0,0", "--q", "1,1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(sflat(&["verify", "--seed", "-3"]).status.code(), Some(2));
}

#[test]
fn small_suite_reports_json() {
    let o = sflat(&["verify", "--suite", "modular", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.get("timing").is_none()));
}

#[test]
fn tolerance_override_can_fail_a_suite() {
    let o = sflat(&["verify", "--suite", "developing", "--tol", "0", "--no-timing"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn rays_hit_once() {
    let o = sflat(&["modular", "rays", "--n", "1000", "--t0", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["histogram"]["1"], 1000);
    assert_eq!(v["all_once"], true);
}

#[test]
fn surface_extend_then_check() {
    let b = scratch("boundary.json");
    std::fs::write(&b, r#"{"a0": 0.2, "cos": [0.4, -0.3], "sin": [0.1, 0.2]}"#).unwrap();
    let out = scratch("surf.json");
    let o = sflat(&[
        "surface",
        "extend",
        "--boundary",
        b.to_str().unwrap(),
        "--R",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--grid",
        "32",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let header: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(header["R"], 1.0);
    assert_eq!(header["kind"], "closed-form");
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 32 * 32);
    let c = sflat(&["surface", "check", "--surface", out.to_str().unwrap(), "--grid", "32"]);
    assert_eq!(c.status.code(), Some(0));
    assert!(json(&c)["completeness_certificate"].as_f64().unwrap() >= 1.0);
}

#[test]
fn volume_time_on_line_without_weight_fails() {
    let o = sflat(&[
        "causal",
        "volumetime",
        "--point",
        "1,0,0",
        "--weight-line",
        "0",
        "--samples",
        "10000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["points"][0]["past_count"], 0);
    assert!(v["points"][0]["error"].as_str().unwrap().contains("degenerate"));
}

#[test]
fn develop_sample_is_seeded_csv() {
    let a = sflat(&["develop", "sample", "--n", "5", "--seed", "3"]);
    let b = sflat(&["develop", "sample", "--n", "5", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("tau,r,theta,t,x,y"));
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[3] - v[4] - v[1]).abs() < 1e-12);
    }
}

#[test]
fn adjoin_rejects_massive_chart() {
    let c = scratch("massive.json");
    std::fs::write(&c, r#"{"angle": 3.0, "radius": 1.0}"#).unwrap();
    assert_eq!(
        sflat(&["extend", "adjoin", "--chart", c.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let r = scratch("btz.json");
    std::fs::write(&r, r#"{"angle": 0.0, "radius": 1.0}"#).unwrap();
    let o = sflat(&["extend", "adjoin", "--chart", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["has_singular_line"], true);
}

#[test]
fn conefield_shows_jump_on_massive_line() {
    let o = sflat(&["conefield", "--alpha", "3.0", "--radii", "1,0.001,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["discrepancy"]["dr_min_jump"], 1.0);
}
