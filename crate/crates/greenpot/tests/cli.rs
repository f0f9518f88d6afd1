//! End-to-end tests of the command-line interface and its exit-code
//! contract: 0 = all checks satisfied, 1 = bad input, 2 = hypotheses fail.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_greenpot"))
}

fn scenario_path(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn torsion_scenario_exits_zero_and_writes_report_and_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let profiles = dir.path().join("profiles");
    let status = bin()
        .args([
            "run",
            &scenario_path("torsion.json"),
            "--out",
            out.to_str().unwrap(),
            "--profiles",
            profiles.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["satisfied"], serde_json::Value::Bool(true));
    // the degenerate linear case converges in one step to Gμ
    assert_eq!(report["checks"]["solve"]["iterations"], 1);
    let u0 = report["checks"]["solve"]["value_at_origin"].as_f64().unwrap();
    assert!((u0 - 1.0 / 6.0).abs() < 2e-4);
    for f in ["gsigma.csv", "gmu.csv", "lower_bound.csv", "solution.csv"] {
        assert!(profiles.join(f).is_file(), "missing profile {f}");
    }
}

#[test]
fn hypothesis_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("atomic.json");
    std::fs::write(
        &scenario,
        r#"{
        "name": "atomic-gate",
        "domain": {"kind": "unit_ball", "dim": 3},
        "sigma": {"kind": "atomic", "points": [[0.0, 0.0, 0.0]], "weights": [1.0]},
        "mu": {"kind": "radial", "rmax": 1.0, "nodes": 64, "value": 1.0},
        "q": 0.5,
        "p": 4.0,
        "eval_set": {"kind": "radial", "rmax": 1.0, "resolution": 64},
        "checks": ["thm11"],
        "seed": 3
    }"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let status = bin()
        .args(["run", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // the report is still written, with the infinity spelled out
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"+inf\""));
}

#[test]
fn sub_threshold_p_exits_one_naming_the_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad_p.json");
    let text = std::fs::read_to_string(scenario_path("torsion.json"))
        .unwrap()
        .replace("\"p\": 4.0", "\"p\": 3.0");
    std::fs::write(&scenario, text).unwrap();
    let out = dir.path().join("report.json");
    let output = bin()
        .args(["run", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("p > n/(n-2)"), "stderr: {stderr}");
    assert!(!out.exists());
}

#[test]
fn unknown_check_and_missing_file_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad_check.json");
    let text = std::fs::read_to_string(scenario_path("torsion.json"))
        .unwrap()
        .replace("\"thm11\"", "\"thm99\"");
    std::fs::write(&scenario, text).unwrap();
    let status = bin()
        .args([
            "run",
            scenario.to_str().unwrap(),
            "--out",
            dir.path().join("r.json").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    let status = bin()
        .args([
            "run",
            dir.path().join("nope.json").to_str().unwrap(),
            "--out",
            dir.path().join("r.json").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn tolerance_and_seed_overrides_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = bin()
        .args([
            "run",
            &scenario_path("torsion.json"),
            "--out",
            out.to_str().unwrap(),
            "--tolerance",
            "rel_tol=1e-6",
            "--seed",
            "123",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["scenario"]["seed"], 123);
    assert_eq!(report["scenario"]["tolerances"]["rel_tol"], 1e-6);
}

#[test]
fn exponents_subcommand_prints_the_bundle() {
    let output = bin()
        .args(["exponents", "--n", "3", "--p", "4.0", "--q", "0.5"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((v["s1"].as_f64().unwrap() - 12.0 / 9.5).abs() < 1e-12);

    let output = bin()
        .args(["exponents", "--n", "3", "--p", "3.0", "--q", "0.5"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn schema_subcommand_prints_the_schema() {
    let output = bin().arg("schema").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v["title"], "greenpot run report");
}

#[test]
fn run_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let status = bin()
            .args([
                "run",
                &scenario_path("torsion.json"),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let strip = |p: &Path| {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
}
