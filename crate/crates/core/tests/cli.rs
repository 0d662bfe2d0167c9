use std::process::{Command, Output};

fn screwsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screwsr"))
        .args(args)
        .env_remove("SCREWSR_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn controllability_grid_for_su2() {
    let out = screwsr(&["controllability", "--group", "SU2", "--k", "1", "--lambda-grid", "default"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "screwsr/1");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 9);
    let blocked: Vec<f64> = reports
        .iter()
        .filter(|r| r["observed"] == false)
        .map(|r| r["lambda"].as_f64().unwrap())
        .collect();
    assert_eq!(blocked, vec![-1.0, 1.0]);
}

#[test]
fn controllability_octonion_and_space_form() {
    let v = json(&screwsr(&["controllability", "--octonion", "--lambda", "1"]));
    assert_eq!(v["reports"][0]["dim_span"], 28);
    assert_eq!(v["reports"][0]["observed"], true);
    let v = json(&screwsr(&["controllability", "--space-form", "--kappa", "0", "--lambda", "0"]));
    assert_eq!(v["reports"][0]["observed"], false);

    // a disagreement with the alternate criterion only warns
    let out = screwsr(&["controllability", "--space-form", "--kappa", "1", "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn geodesic_reports() {
    let out = screwsr(&["geodesic", "--group", "SU2", "--k", "0", "--lambda", "1", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certification"]["passed"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 101);

    let v = json(&screwsr(&[
        "geodesic", "--octonion", "--x", "1,0,0,0,0,0,0", "--y", "0,1,0,0,0,0,0", "--lambda", "1",
    ]));
    assert!((v["generators"]["c"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!((v["generators"]["d"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-15);

    let v = json(&screwsr(&["geodesic", "--group", "SO3", "--k", "1", "--lambda", "0.5", "--commuting"]));
    assert_eq!(v["certification"]["degeneration"]["single_exponential"], true);
}

#[test]
fn preconditions_exit_with_two() {
    for args in [
        &["geodesic", "--group", "SU2", "--k", "1", "--lambda", "1"][..],
        &["geodesic", "--octonion", "--x", "1,0,0,0,0,0,0", "--y", "1,0,0,0,0,0,0", "--lambda", "1"],
        &["geodesic", "--space-form", "--kappa", "0", "--lambda", "0"],
        &["controllability", "--group", "SO2"],
        &["controllability", "--no-such-flag"],
        &["controllability", "--format", "xml"],
    ] {
        let out = screwsr(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let err = String::from_utf8_lossy(&screwsr(&["geodesic", "--group", "SU2", "--k", "1", "--lambda", "1"]).stderr).to_string();
    assert!(err.contains("lambda^2 = k"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = screwsr(&[
            "geodesic", "--group", "Sp1", "--k", "-1", "--lambda", "0.75", "--seed", "11", "--format", "csv", "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(!ta.contains(&b'\r'));
    let text = String::from_utf8(ta).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,"));
}

#[test]
fn verify_all_modes() {
    let out = screwsr(&["verify-all", "--geodesic-seeds", "2", "--format", "json", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(0));

    let out = screwsr(&["verify-all", "--geodesic-seeds", "1", "--inject-table-typo"]);
    assert_eq!(out.status.code(), Some(1));
    let log = String::from_utf8_lossy(&out.stderr);
    assert!(log.lines().any(|l| l.starts_with("FAIL") && l.contains("octonion.cross_cyclicity")));

    let out = screwsr(&["verify-all", "--geodesic-seeds", "1", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance-bound"));

    let out = Command::new(env!("CARGO_BIN_EXE_screwsr"))
        .args(["verify-all", "--geodesic-seeds", "1"])
        .env("SCREWSR_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orbit_table() {
    let out = screwsr(&["orbit", "--epsilon", "-1", "--samples", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.starts_with("s,t,epsilon,"));
}
