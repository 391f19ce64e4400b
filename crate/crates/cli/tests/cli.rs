use std::f64::consts::PI;
use std::fs::File;
use std::path::Path;
use std::process::{Command, Output};

use ncosc_core::SampledField;
use serde_json::Value;

fn ncosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncosc")).args(args).output().expect("spawn ncosc")
}

fn ok(args: &[&str]) -> String {
    let out = ncosc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn read_field(path: &Path) -> SampledField {
    SampledField::read_binary(File::open(path).unwrap()).unwrap()
}

#[test]
fn sweep_schema_and_rows() {
    let csv = ok(&["sweep", "--theta", "0:2:41", "--eta", "0:2:41"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,eta,dim,F_r_nc,F_p_nc,S_r_nc,S_p_nc,var_r_nc,var_p_nc,cr_r,cr_p,bbm_sum,provenance"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1681);
    let first = &rows[0];
    assert_eq!((first[0], first[1]), ("0", "0"));
    assert_eq!(first[3].parse::<f64>().unwrap(), 4.0);
    assert!((first[5].parse::<f64>().unwrap() - (1.0 + PI.ln())).abs() < 1e-15);
    // θ-major ordering
    assert_eq!((rows[1][0], rows[1][1]), ("0", "0.05"));
    assert_eq!((rows[41][0], rows[41][1]), ("0.05", "0"));
    for r in &rows {
        let s: f64 = r[5].parse::<f64>().unwrap() + r[6].parse::<f64>().unwrap();
        assert!((s - 2.0 * (1.0 + PI.ln())).abs() < 1e-12);
        assert_eq!(r[12], "closed-form");
    }
}

#[test]
fn sweep_three_dimensions_and_quadrature_rows() {
    let csv = ok(&["sweep", "--dim", "3", "--theta", "0:2:11", "--eta", "0:2:11"]);
    for line in csv.lines().skip(1) {
        let r: Vec<f64> = line.split(',').skip(5).take(2).map(|v| v.parse().unwrap()).collect();
        assert!((r[0] + r[1] - 3.0 * (1.0 + PI.ln())).abs() < 1e-12);
    }
    let csv = ok(&["sweep", "--theta", "0:1:2", "--eta", "0.5", "--quadrature"]);
    let kinds: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(kinds, ["closed-form", "quadrature", "closed-form", "quadrature"]);
}

#[test]
fn sweep_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let stdout = ok(&["sweep", "--theta", "0:1:3", "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);
    let out = ncosc(&["sweep", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn info_examples() {
    let v = json(&["info"]);
    assert!((num(&v["closed_form"]["bbm_sum"]) - 4.289459).abs() < 1e-6);
    assert!(v.get("quadrature").is_none());
    let v = json(&["info", "--dim", "3"]);
    assert!((num(&v["closed_form"]["f_r_nc"]) - 6.0).abs() < 1e-14);
    let v = json(&["info", "--theta", "1", "--eta", "0"]);
    assert!((num(&v["closed_form"]["f_r_nc"]) - 2.981424).abs() < 1e-6);
    assert_eq!(v["closed_form_bounds"]["position_ok"], Value::Bool(true));

    let v = json(&["info", "--theta", "0.5", "--eta", "1", "--quadrature", "--drive", "sin:0.3:1.3"]);
    let (q, c) = (&v["quadrature"], &v["closed_form"]);
    assert_eq!(q["provenance"], "quadrature");
    for key in ["f_r_nc", "f_p_nc", "s_r_nc", "s_p_nc", "var_r_nc", "var_p_nc"] {
        assert!((num(&q[key]) / num(&c[key]) - 1.0).abs() < 1e-6, "{key}");
    }
    assert!(num(&v["quadrature_bounds"]["momentum_margin"]) >= 0.0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["info", "--dim", "4"][..],
        &["info", "--theta", "0:1:3"],
        &["sweep", "--theta", "2:1:3"],
        &["sweep", "--eta", "0:1:0"],
        &["sweep", "--drive", "square:1"],
        &["sweep", "--drive", "table:/nonexistent.csv"],
        &["sweep", "--config", "/nonexistent.json"],
        &["state", "--n", "1,2,3"],
        &["state", "--n", "31,0"],
        &["sweep", "--bogus"],
        &["frobnicate"],
    ] {
        let out = ncosc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("drive.csv"), "t,value\n0,0\n1,0.5\n2,0.25\n3,0\n").unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"dim": 2, "theta": {"min": 0, "max": 1, "count": 2}, "eta": 0.5, "drive": "table:drive.csv,zero", "t": 1.5}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let csv = ok(&["sweep", "--config", cfg]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(2).unwrap().starts_with("1,0.5,2,"));
    let csv = ok(&["sweep", "--config", cfg, "--eta", "0", "--dim", "3"]);
    assert!(csv.lines().nth(1).unwrap().starts_with("0,0,3,"));
    let v = json(&["info", "--config", cfg, "--theta", "1", "--quadrature"]);
    assert!((num(&v["quadrature"]["bbm_sum"]) - num(&v["bbm_bound"])).abs() < 1e-6);
}

#[test]
fn ground_state_export_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("g");
    let meta = json(&["state", "--out", prefix.to_str().unwrap(), "--grid-points", "128"]);
    for domain in ["position", "momentum"] {
        assert!((num(&meta[domain]["norm"]) - 1.0).abs() < 1e-9, "{domain}");
        let csv = std::fs::read_to_string(meta[domain]["csv"].as_str().unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 128 * 128 + 1);
        let field = read_field(Path::new(meta[domain]["binary"].as_str().unwrap()));
        assert!((field.norm_sq() - 1.0).abs() < 1e-9);
    }
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.meta.json")).unwrap()).unwrap();
    assert_eq!(saved, meta);
}

#[test]
fn first_excited_state_is_odd_along_axis_one() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("e");
    let meta = json(&["state", "--n", "1,0", "--t", "0", "--domain", "position", "--out", prefix.to_str().unwrap()]);
    assert!(meta.get("momentum").is_none());
    let f = read_field(Path::new(meta["position"]["binary"].as_str().unwrap()));
    let (n0, n1) = (f.axes[0].len, f.axes[1].len);
    assert!((f.axes[0].start + f.axes[0].end()).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for i in 0..n0 {
        for j in 0..n1 {
            let a = f.values[i * n1 + j];
            let b = f.values[(n0 - 1 - i) * n1 + j];
            worst = worst.max((a + b).norm());
        }
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn driven_density_follows_the_classical_center() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("d");
    let meta = json(&[
        "state", "--theta", "1", "--eta", "0.5", "--drive", "sin:0.8:1.3,const:0.4", "--t", "2.2",
        "--grid-points", "256", "--out", prefix.to_str().unwrap(),
    ]);
    let f = read_field(Path::new(meta["position"]["binary"].as_str().unwrap()));
    let n1 = f.axes[1].len;
    let mut mean = [0.0; 2];
    let mut total = 0.0;
    for (k, v) in f.values.iter().enumerate() {
        let w = v.norm_sqr();
        mean[0] += w * f.axes[0].point(k / n1);
        mean[1] += w * f.axes[1].point(k % n1);
        total += w;
    }
    for a in 0..2 {
        let center = num(&meta["position_center"][a]);
        assert!(center.abs() > 0.05, "drive should move the packet");
        assert!((mean[a] / total - center).abs() < f.axes[a].step, "axis {a}");
    }
}

#[test]
fn verify_exit_codes() {
    let out = ncosc(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.trim_end().ends_with("0 failed"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let out = ncosc(&["verify", "--theta", "1", "--eta", "1", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("check,value,reference,deviation,tolerance,comparison,passed"));

    let out = ncosc(&["verify", "--perturb-phase", "0.1", "--drive", "sin:0.3:1.3"]);
    assert_eq!(out.status.code(), Some(1));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("schrodinger residual") && l.ends_with("FAIL")));
}

#[test]
fn verify_three_dimensions() {
    let out = ncosc(&["verify", "--dim", "3", "--theta", "0.5", "--eta", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
