//! Report schema, determinism and anchors.

use closed_g2::harness::{run_suites, RunConfig, Suite};
use closed_g2::report::{anchors, emit_report, parse_report, Format, PLUMBING};

fn light_config(seed: u64) -> RunConfig {
    RunConfig {
        suites: vec![Suite::Growth, Suite::Pointwise, Suite::Properties],
        seed,
        ..Default::default()
    }
}

#[test]
fn json_round_trip() {
    let rep = run_suites(&light_config(5)).unwrap();
    let bytes = emit_report(&rep, Format::Json).unwrap();
    assert_eq!(parse_report(&bytes).unwrap(), rep);
}

#[test]
fn same_seed_same_bytes() {
    let a = emit_report(&run_suites(&light_config(5)).unwrap(), Format::Json).unwrap();
    let b = emit_report(&run_suites(&light_config(5)).unwrap(), Format::Json).unwrap();
    assert_eq!(a, b);
    let c = emit_report(&run_suites(&light_config(6)).unwrap(), Format::Json).unwrap();
    assert_ne!(a, c);
}

#[test]
fn anchors_resolve_and_names_unique() {
    let mut cfg = light_config(1);
    cfg.suites.push(Suite::Field);
    cfg.chart.resolution = 6;
    let rep = run_suites(&cfg).unwrap();
    let mut names = std::collections::HashSet::new();
    for c in &rep.checks {
        assert!(
            c.anchor == PLUMBING || anchors::ALL.contains(&c.anchor.as_str()),
            "{}: {}",
            c.name,
            c.anchor
        );
        assert!(names.insert(c.name.clone()), "duplicate {}", c.name);
    }
    assert_eq!(rep.summary.pass + rep.summary.fail, rep.checks.len());
    assert_eq!(rep.exit_code() == 0, rep.summary.fail == 0);
}

#[test]
fn flat_structure_all_suites_pass() {
    let cfg: RunConfig = RunConfig::from_json(
        r#"{"version": 1, "structure": {"kind": "flat"}, "chart": {"resolution": 6},
            "suites": ["pointwise", "properties", "field", "growth", "convergence"],
            "convergence": {"resolutions": [6, 8]}}"#,
    )
    .unwrap();
    let rep = run_suites(&cfg).unwrap();
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn text_and_csv_emit() {
    let rep = run_suites(&light_config(2)).unwrap();
    let text = String::from_utf8(emit_report(&rep, Format::Text).unwrap()).unwrap();
    assert!(text.contains("passed") && text.contains("[PASS] growth.threshold"));
    let csv = String::from_utf8(emit_report(&rep, Format::Csv).unwrap()).unwrap();
    assert!(csv.starts_with("name,anchor,residual,tolerance,convergence_ratio,pass\n"));
}
