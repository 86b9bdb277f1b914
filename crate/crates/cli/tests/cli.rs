//! End-to-end runs of the binary.

use std::process::Command;

use closed_g2::report::parse_report;

fn g2verify(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_g2verify"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn growth_json_is_deterministic() {
    let (code, a, _) = g2verify(&["growth", "--format", "json"]);
    let (_, b, _) = g2verify(&["growth", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let rep = parse_report(&a).unwrap();
    assert_eq!(rep.summary.fail, 0);
    assert!(rep.check("growth.geodesic_einstein").unwrap().pass);
    assert!(!rep.tables.growth.is_empty());
}

#[test]
fn growth_csv_table() {
    let (code, out, _) = g2verify(&["growth", "--format", "csv"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    let table = text.split("\n\n").find(|s| s.starts_with("r,")).expect("growth table");
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("r,lower_bound,comparison_volume,profile"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r.len() == 4 && r.iter().all(|v| v.is_finite())));
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let (code, stdout, _) = g2verify(&[
        "growth",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let rep = parse_report(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(rep.environment.seed, 9);
}

#[test]
fn usage_and_config_errors_exit_126() {
    assert_eq!(g2verify(&["growth", "--format", "yaml"]).0, 126);
    assert_eq!(g2verify(&["run", "--suite", "nope"]).0, 126);
    assert_eq!(g2verify(&["frobnicate"]).0, 126);
    assert_eq!(g2verify(&["run", "--config", "/nonexistent/config.json"]).0, 126);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"version": 1, "structure": {"kind": "perturbedClosed", "amplitude": 10.0}}"#,
    )
    .unwrap();
    let (code, _, err) = g2verify(&["verify-field", "--config", cfg.to_str().unwrap(), "--resolution", "6"]);
    assert_eq!(code, 126);
    assert!(err.contains("non-positive"), "{err}");
}

#[test]
fn failures_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    std::fs::write(&cfg, r#"{"version": 1, "tolerances": {"growth": 1e-300}}"#).unwrap();
    let (code, out, _) = g2verify(&["growth", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let rep = parse_report(&out).unwrap();
    assert!(rep.summary.fail > 0);
    assert_eq!(code as usize, rep.summary.fail);
}

#[test]
fn empty_suite_list_is_a_valid_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"version": 1, "suites": []}"#).unwrap();
    let (code, out, _) = g2verify(&["run", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    assert!(parse_report(&out).unwrap().checks.is_empty());
}

#[test]
fn gallery_snapshot_feeds_explicit_field() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("phi.g2f");
    let (code, _, err) = g2verify(&["gallery", "--resolution", "6", "--out", snap.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let cfg = dir.path().join("explicit.json");
    let body = format!(
        r#"{{"version": 1, "structure": {{"kind": "explicitField", "path": {:?}}}}}"#,
        snap.to_str().unwrap()
    );
    std::fs::write(&cfg, body).unwrap();
    let (code, out, err) = g2verify(&["verify-field", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let rep = parse_report(&out).unwrap();
    assert_eq!(rep.environment.resolutions, vec![6]);
    assert!(rep.check("field.closed@6").unwrap().pass);
}

#[test]
fn verify_pointwise_runs_property_suite() {
    let (code, out, _) = g2verify(&["verify-pointwise", "--format", "json", "--seed", "3"]);
    assert_eq!(code, 0);
    let rep = parse_report(&out).unwrap();
    for name in [
        "property.three_form_ranks@random",
        "property.d_squared",
        "property.hodge_involution",
        "pointwise.eta_cubed",
    ] {
        assert!(rep.check(name).unwrap().pass, "{name}");
    }
}
