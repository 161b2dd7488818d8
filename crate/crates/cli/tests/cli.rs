use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasespace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn even_dimension_is_a_config_error() {
    let out = run(&["frame-check", "--d", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn frame_check_d3_passes_and_reports_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["frame-check", "--d", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&path);
    let records = r["records"].as_array().unwrap();
    assert!(records.len() >= 5);
    for rec in records {
        assert_eq!(rec["pass"], true);
        assert!(rec["tolerance"].is_number());
        assert_eq!(rec["inputs_digest"].as_str().unwrap().len(), 64);
        assert!(rec.get("wall_time").is_none());
    }
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let out = run(&["star-demo", "--tolerance", "star_associativity=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAILED star_associativity"), "{err}");
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rec = r["records"].as_array().unwrap().iter().find(|x| x["check_name"] == "star_associativity").unwrap();
    assert_eq!(rec["tolerance"], 1e-30);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"d": 7, "seed": 9, "params": {"trials": 2, "operators": 3}}"#).unwrap();
    let out = run(&["star-demo", "--config", cfg.to_str().unwrap(), "--d", "3", "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["d"], 3);
    assert_eq!(r["seed"], 9);
    assert!(r["records"][0]["wall_time"].is_number());

    std::fs::write(&cfg, r#"{"dimension": 7}"#).unwrap();
    assert_eq!(run(&["star-demo", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn semigroup_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let at_zero = dir.path().join("zero.csv");
    let out = run(&["semigroup-run", "--t-grid", "0", "--out", at_zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&at_zero);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], 0.0);
    assert!(dir.path().join("zero.report.json").exists());

    let long = dir.path().join("long.csv");
    let out = run(&["semigroup-run", "--t-grid", "0,1,5,40", "--out", long.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&long);
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1] - 1e-10));
    assert!((rows[3][1] - 5f64.ln()).abs() < 1e-8);
    assert!((rows[3][2] - 0.2).abs() < 1e-8);

    let spec = dir.path().join("spec.json");
    let mut masses = vec![0.0; 9];
    masses[1] = 1.0;
    std::fs::write(&spec, serde_json::json!({"d": 3, "rate": 0.5, "jump_measure": masses}).to_string()).unwrap();
    let out = run(&["semigroup-run", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("t,entropy,purity,intertwining_defect\n"));
}

#[test]
fn negative_time_is_rejected() {
    let out = run(&["semigroup-run", "--t-grid", "0,-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cwt_zero_signal_and_inadmissible_wavelet() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.csv");
    std::fs::write(&zero, "0,0\n".repeat(256)).unwrap();
    let coeffs = dir.path().join("c.csv");
    let out = run(&["cwt", "--signal", zero.to_str().unwrap(), "--dt", "0.05", "--out", coeffs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&coeffs);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[2] == 0.0 && r[3] == 0.0));

    let gauss = dir.path().join("g.csv");
    let out = run(&["cwt", "--wavelet", "gaussian", "--out", gauss.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&gauss).unwrap(), "b,a,re,im\n");
    let r = report(&dir.path().join("g.report.json"));
    assert_eq!(r["records"][0]["check_name"], "admissibility_growth");
    assert_eq!(r["records"][0]["pass"], false);

    let missing = run(&["cwt", "--signal", "/nonexistent/signal.csv", "--dt", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bundled_fixture_isometry() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/chirp.csv");
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c.csv");
    let out = run(&["cwt", "--signal", fixture.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&dir.path().join("c.report.json"));
    let iso = r["records"].as_array().unwrap().iter().find(|x| x["check_name"] == "isometry_ratio_defect").unwrap();
    assert!(iso["value"].as_f64().unwrap().abs() <= 0.03);
}

#[test]
fn fock_demo_writes_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fock.json");
    let out = run(&["fock-demo", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("fock.grid.csv"));
    assert_eq!(rows.len(), 13 * 13);
    for r in rows {
        let expected = (-(r[0] * r[0] + r[1] * r[1]) / 4.0).exp();
        assert!((r[2] - expected).abs() < 1e-8 && r[3].abs() < 1e-8);
    }
}

#[test]
fn same_seed_same_bytes() {
    let a = run(&["qpt-check", "--d", "3", "--seed", "42"]);
    let b = run(&["qpt-check", "--d", "3", "--seed", "42"]);
    let c = run(&["qpt-check", "--d", "3", "--seed", "43"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
