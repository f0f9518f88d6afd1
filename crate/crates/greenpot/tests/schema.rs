//! Every report the pipeline emits must validate against the published
//! schema.

use greenpot::pipeline::{run_scenario, RunOptions};
use greenpot::report::REPORT_SCHEMA;
use greenpot::scenario::Scenario;

fn validate(report_json: &str) {
    let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let instance: serde_json::Value = serde_json::from_str(report_json).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn scenario(path: &str) -> Scenario {
    Scenario::from_path(std::path::Path::new(&format!(
        "{}/../../scenarios/{path}",
        env!("CARGO_MANIFEST_DIR")
    )))
    .unwrap()
}

#[test]
fn shipped_scenarios_produce_schema_valid_reports() {
    for name in ["torsion.json", "homogeneous.json", "mixed.json"] {
        let report = run_scenario(&scenario(name), &RunOptions::default()).unwrap();
        validate(&report.to_json().unwrap());
    }
}

#[test]
fn unsatisfied_reports_also_validate() {
    // atomic σ drives n1 to "+inf"; the schema must cover the extended reals
    let sc = Scenario::from_json(
        r#"{
        "name": "atomic-gate",
        "domain": {"kind": "unit_ball", "dim": 3},
        "sigma": {"kind": "atomic", "points": [[0.0, 0.0, 0.0]], "weights": [1.0]},
        "mu": {"kind": "radial", "rmax": 1.0, "nodes": 64, "value": 1.0},
        "q": 0.5,
        "p": 4.0,
        "eval_set": {"kind": "radial", "rmax": 1.0, "resolution": 64},
        "checks": ["thm11", "lemma26_27_28"],
        "seed": 3
    }"#,
    )
    .unwrap();
    let report = run_scenario(&sc, &RunOptions::default()).unwrap();
    assert!(!report.satisfied);
    let json = report.to_json().unwrap();
    assert!(json.contains("\"+inf\""));
    assert!(json.contains("\"skipped\""));
    validate(&json);
}

#[test]
fn frozen_reference_report_validates() {
    let frozen = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/homogeneous_report.json"
    ))
    .unwrap();
    validate(&frozen);
}
