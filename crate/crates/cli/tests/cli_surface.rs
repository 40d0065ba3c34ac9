//! External-interface tests: binary exit codes, manifest/output agreement,
//! sweep isolation, and config round-tripping.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;

use pfode_cli::config::{load_plan, parse_config};
use pfode_cli::runner;

fn test_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pfode_surface_{tag}"));
    fs::remove_dir_all(&dir).ok();
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &PathBuf, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn pfode() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pfode"))
}

#[test]
fn preset_list_and_show() {
    let out = pfode().args(["preset", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["fig1-linear", "fig2-sweep", "fig3-nonlinear", "fig4-sweep"] {
        assert!(text.contains(name), "missing {name} in: {text}");
    }

    let out = pfode().args(["preset", "show", "fig2-sweep"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("r2_m1_w2_m225"));

    let out = pfode().args(["preset", "show", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_exit_codes() {
    let dir = test_dir("check");
    let good = write_config(
        &dir,
        "good.json",
        r#"{"model": "fig1-linear", "kernel": "cf", "alpha": 0.9,
            "schedule": {"a1": 1, "a2": 2, "a": 3}}"#,
    );
    let out = pfode().arg("check").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);

    let bad = write_config(
        &dir,
        "bad.json",
        r#"{"model": "fig1-linear", "kernel": "cf", "alpha": 1.7,
            "schedule": {"a1": 1, "a2": 2, "a": 3}}"#,
    );
    let out = pfode().arg("check").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = pfode().arg("check").arg(dir.join("missing.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(4), "missing file is an io failure");
}

#[test]
fn run_produces_outputs_and_manifest() {
    let dir = test_dir("run");
    let out_dir = dir.join("out");
    let config = write_config(
        &dir,
        "run.json",
        &format!(
            r#"{{"model": "fig1-linear", "kernel": "cf", "alpha": [0.9, 0.97],
                "schedule": {{"a1": 0.5, "a2": 1.0, "a": 1.5}}, "dt": 0.01, "seed": 3,
                "outputs": {{"csv": true, "svg": true, "out_dir": "{}"}}}}"#,
            out_dir.display()
        ),
    );
    let out = pfode().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", String::from_utf8_lossy(&out.stderr));

    // Manifest lists exactly the files present (besides itself).
    let manifest_text = fs::read_to_string(out_dir.join("manifest.json")).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&manifest_text).unwrap();
    let mut listed: Vec<String> = manifest["runs"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["files"].as_array().unwrap().iter())
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    listed.sort();
    let mut present: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().to_string())
        .filter(|n| n != "manifest.json")
        .collect();
    present.sort();
    assert_eq!(listed, present);
    // 2 alphas x (csv + 2 series svg + portrait svg).
    assert_eq!(present.len(), 8);
    assert_eq!(manifest["grid"]["n"], 150);
    assert_eq!(manifest["seed_used"], 3);
}

#[test]
fn run_flags_override_config() {
    let dir = test_dir("flags");
    let out_dir = dir.join("flagged");
    let config = write_config(
        &dir,
        "run.json",
        r#"{"model": "fig1-linear", "kernel": "caputo", "alpha": 0.9,
            "schedule": {"a1": 0.5, "a2": 1.0, "a": 1.5}, "dt": 0.01,
            "outputs": {"csv": true, "svg": true, "out_dir": "ignored"}}"#,
    );
    let out = pfode()
        .arg("run")
        .arg(&config)
        .arg("--out-dir")
        .arg(out_dir.display().to_string())
        .args(["--seed", "77", "--no-svg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().to_string())
        .collect();
    assert!(names.iter().any(|n| n.contains("seed77")), "{names:?}");
    assert!(!names.iter().any(|n| n.ends_with(".svg")), "{names:?}");
}

#[test]
fn blow_up_exit_code_with_manifest() {
    // dt too coarse for the strongest couplings: some panels blow up, exit 3,
    // and the manifest still lands with per-run statuses.
    let dir = test_dir("blowup");
    let out_dir = dir.join("out");
    let config = write_config(
        &dir,
        "sweep.json",
        &format!(
            r#"{{"model": "fig2-sweep", "kernel": "cf", "alpha": 0.95,
                "schedule": {{"a1": 20, "a2": 40, "a": 60}}, "dt": 0.2, "seed": 1,
                "outputs": {{"csv": true, "svg": false, "out_dir": "{}"}}}}"#,
            out_dir.display()
        ),
    );
    let out = pfode().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    let runs = manifest["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 14);
    let failed = runs.iter().filter(|r| r["status"] == "failed").count();
    let ok = runs.iter().filter(|r| r["status"] == "ok").count();
    assert!(failed > 0, "expected at least one blow-up at dt = 0.2");
    assert!(ok > 0, "expected surviving panels");
    for r in runs {
        if r["status"] == "failed" {
            let msg = r["error"].as_str().unwrap();
            assert!(msg.contains("blow-up") || msg.contains("exceeded"), "{msg}");
        }
    }
}

#[test]
fn sweep_isolation_matches_single_runs() {
    // The mild fig2 panel, run inside the full sweep (where other panels
    // blow up) and as a standalone inline model: identical CSV bytes.
    let dir = test_dir("isolation");
    let sweep_dir = dir.join("sweep");
    let single_dir = dir.join("single");
    let sweep = load_plan(&format!(
        r#"{{"model": "fig2-sweep", "kernel": "cf", "alpha": 0.95,
            "schedule": {{"a1": 20, "a2": 40, "a": 60}}, "dt": 0.2, "seed": 1,
            "outputs": {{"csv": true, "svg": false, "out_dir": "{}"}}}}"#,
        sweep_dir.display()
    ))
    .unwrap();
    let manifest = runner::run(&sweep).unwrap();
    assert!(manifest.any_failed());

    let single = load_plan(&format!(
        r#"{{"model": {{"type": "linear", "rho1": 0.12, "rho2": 0.01,
                        "omega1": 6.1, "omega2": -1, "gamma1": 0.5, "gamma2": 1.2,
                        "psi1": 0.8, "psi2": 0.81}},
            "kernel": "cf", "alpha": 0.95, "sigmas": [0.02, 0.01],
            "schedule": {{"a1": 20, "a2": 40, "a": 60}}, "dt": 0.2, "seed": 1,
            "outputs": {{"csv": true, "svg": false, "out_dir": "{}"}}}}"#,
        single_dir.display()
    ))
    .unwrap();
    let single_manifest = runner::run(&single).unwrap();
    assert!(!single_manifest.any_failed());

    let sweep_csv = fs::read(sweep_dir.join("fig2-sweep_r2_0p01_w2_m1_cf_a0p95_seed1.csv")).unwrap();
    let single_csv = fs::read(single_dir.join("inline-linear_cf_a0p95_seed1.csv")).unwrap();
    assert_eq!(sweep_csv, single_csv, "sweep siblings contaminated the panel");
}

#[test]
fn order_test_runs() {
    let out = pfode().arg("order-test").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("order"), "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn config_round_trip(
        seed in any::<u64>(),
        dt_m in 1u32..100,
        alphas in prop::collection::vec(1u32..100, 1..4),
        svg in any::<bool>(),
    ) {
        let alpha_json: Vec<String> = alphas.iter().map(|a| format!("{}", *a as f64 / 100.0)).collect();
        let text = format!(
            r#"{{"model": "fig3-nonlinear", "kernel": "abc",
                "alpha": [{}],
                "schedule": {{"a1": 5, "a2": 10, "a": 15}},
                "dt": {}, "seed": {},
                "outputs": {{"csv": true, "svg": {}, "out_dir": "x"}}}}"#,
            alpha_json.join(","),
            dt_m as f64 / 1000.0,
            seed,
            svg
        );
        let config = parse_config(&text).unwrap();
        let serialized = serde_json::to_string(&config).unwrap();
        let reparsed = parse_config(&serialized).unwrap();
        prop_assert_eq!(reparsed, config);
    }
}
