use std::process::{Command, Output};

use gti_asym::cli::RunManifest;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gti-asym")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn refined_gap(a: &str) -> f64 {
    let out = stdout(&run(&["zeros", "--family", "Ci", "--a", a, "--m", "1", "--K", "10", "--refine", "--reproducible"]));
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "family,a,m,leading,theta_assembled,theta_refined,delta_log10,degenerate_flag");
    let row = &data_rows(&out)[0];
    let assembled: f64 = row[4].parse().unwrap();
    let refined: f64 = row[5].parse().unwrap();
    (assembled / refined - 1.0).abs()
}

#[test]
fn zeros_prints_assembled_and_refined() {
    // at a = 10 the truncation error of the K = 10 series is about 1e-5
    assert!(refined_gap("10") < 2e-5);
    assert!(refined_gap("40") <= 1e-9);
}

#[test]
fn coeffs_order_three_text() {
    let out = stdout(&run(&["coeffs", "--order", "3"]));
    assert!(out.contains("E1(z) = z/(z - 1)^2"));
    assert!(out.contains("E2(z) = z*(3*z + 2)/(2*(z - 1)^4)"));
    assert!(out.contains("E3(z) = z*(13*z^2 + 21*z + 3)/(3*(z - 1)^6)"), "{out}");
    assert!(out.contains("L3(theta)") && out.contains("R3(theta)"));

    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["coeffs", "--order", "3", "--json"]))).unwrap();
    assert_eq!(json["coefficients"].as_array().unwrap().len(), 3);
    assert!(json["coefficients"][0]["L"]["num"].is_array());
}

#[test]
fn invalid_combination_exits_2_without_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    let p = path.to_str().unwrap();
    // lower families accept at most K = 5
    let o = run(&["zeros", "--family", "ci", "--a", "10.3", "--m", "1..5", "--K", "8", "--out", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
    // theta belongs to --family, z to --igf
    assert_eq!(run(&["eval", "--igf", "lower", "--a", "10", "--theta", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "Ci", "--a", "1e1", "--theta", "1"]).status.code(), Some(2));
    assert_eq!(run(&["zeros", "--family", "Ci", "--a", "10", "--m", "3..1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "Ci", "--a", "-2", "--theta", "1"]).status.code(), Some(2));
}

#[test]
fn reproducible_output_is_byte_identical() {
    let args = ["zeros", "--family", "Si", "--a", "12.5", "--m", "1..40", "--K", "8", "--reproducible"];
    let one = Command::new(env!("CARGO_BIN_EXE_gti-asym")).args(args).env("GTI_ASYM_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_gti-asym")).args(args).env("GTI_ASYM_THREADS", "4").output().unwrap();
    assert_eq!(stdout(&one), stdout(&many));
    assert!(!stdout(&one).contains("timestamp"));
    let ms: Vec<u32> = data_rows(&stdout(&one)).iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(ms, (1..=40).collect::<Vec<_>>());

    let bad = Command::new(env!("CARGO_BIN_EXE_gti-asym")).args(args).env("GTI_ASYM_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn manifests_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("zeros.csv", vec!["zeros", "--family", "ti", "--a", "10.3", "--alpha", "0.25", "--m", "1..4", "--K", "6"]),
        ("fig1.csv", vec!["figure", "level-curves", "--nx", "120", "--ny", "80"]),
        ("fig2.csv", vec!["figure", "delta-plot", "--a", "10", "--m-max", "5"]),
    ];
    for (name, args) in files {
        let path = dir.path().join(name);
        let mut full = args.clone();
        full.extend(["--out", path.to_str().unwrap()]);
        let o = run(&full);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let m = RunManifest::parse(&text).unwrap();
        assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
        assert!(m.timestamp.is_some());
        let again = RunManifest::parse(&m.header()).unwrap();
        assert_eq!(again, m);
        assert!(!data_rows(&text).is_empty(), "{name}");
    }
}

#[test]
fn level_curve_columns() {
    let out = stdout(&run(&["figure", "level-curves", "--c", "-0.5,0.25", "--nx", "100", "--ny", "60", "--reproducible"]));
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "curve_id,c,re_z,im_z");
    let levels: std::collections::BTreeSet<String> = data_rows(&out).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(levels.into_iter().collect::<Vec<_>>(), ["-0.5", "0.25"]);
}

#[test]
fn delta_plot_scaling() {
    let out = stdout(&run(&["figure", "delta-plot", "--a", "20.5", "--m-max", "4", "--K", "10", "--reproducible"]));
    for row in data_rows(&out) {
        let x: f64 = row[2].parse().unwrap();
        let d: f64 = row[3].parse().unwrap();
        let l: f64 = row[4].parse().unwrap();
        assert!(x > 20.5 * row[1].parse::<f64>().unwrap() * 0.9);
        assert!((d.abs().log10() - l).abs() < 1e-12);
        assert!(l < -7.0);
    }
}

#[test]
fn oracle_single_and_grid() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["oracle", "--family", "Si", "--a", "10", "--theta", "3.2"]))).unwrap();
    let single = v["value"].as_f64().unwrap();
    assert!(single.is_finite());

    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    std::fs::write(&grid, "family,a,theta\nSi,10,3.2\nci,10.3,0.7\n").unwrap();
    let out = stdout(&run(&["oracle", "--grid", grid.to_str().unwrap(), "--reproducible"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2);
    let first: f64 = rows[0][4].parse().unwrap();
    assert_eq!(first, single);

    std::fs::write(&grid, "family,a\nSi,10\n").unwrap();
    assert_eq!(run(&["oracle", "--grid", grid.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn eval_and_bounds_json() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "eval", "--family", "Ci", "--a", "10", "--theta", "1.25", "--order", "5", "--alpha", "0.3", "--bound",
    ])))
    .unwrap();
    assert!(v["value"].as_f64().unwrap().is_finite());
    assert!(v["eta_bound"].as_f64().is_some());

    let b: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["bounds", "--a", "25", "--z", "2,0", "--n", "2", "--kind", "infinity"]))).unwrap();
    assert!(b["eta_bound"].as_f64().unwrap() > 0.0);
}
