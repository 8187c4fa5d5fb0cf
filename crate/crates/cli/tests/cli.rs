use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qndsim_cli::config::{config_hash, parse};
use qndsim_cli::{diagnose_config, CliError};

fn qndsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qndsim")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn bundled(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .display()
        .to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_scenarios() {
    let o = qndsim(&["list-scenarios"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for kind in ["cavity-spectrum", "trap-map", "noise-sweep", "scattering-sweep", "rabi", "spin-echo", "squeezing"] {
        assert!(text.contains(kind), "{kind} missing");
    }
}

#[test]
fn empty_scenario_list_is_a_noop() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "empty.json", r#"{"schema_version": 1, "scenarios": []}"#);
    let out = tmp.path().join("out");
    let o = qndsim(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["artifacts"].as_array().unwrap().len(), 0);
}

#[test]
fn bundled_configs_validate() {
    for name in ["cavity_spectrum.json", "rabi.json", "spin_echo.json", "squeezing.json"] {
        let o = qndsim(&["validate", &bundled(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
}

#[test]
fn oversized_modulation_depth_is_a_regime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "beta.json",
        r#"{"schema_version": 1, "scenarios": [{"kind": "rabi", "probe": {"modulation_depth": 2.0}}]}"#,
    );
    let o = qndsim(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("scenarios.0.probe.modulation_depth"), "{}", stderr(&o));

    let o = qndsim(&["run", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn large_atomic_phase_is_flagged() {
    let config = parse(
        r#"{"schema_version": 1, "scenarios": [{"kind": "spin-echo", "ensemble": {"atom_number": 1e9}}]}"#,
        &[],
    )
    .unwrap();
    let diags = diagnose_config(&config);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].path, "scenarios.0.ensemble.atom_number");
}

#[test]
fn schema_errors_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    for (body, field) in [
        (r#"{"kind": "rabi", "probe": {"waist_um": null}}"#, "scenarios[0].probe.waist_um"),
        (r#"{"kind": "rabi", "probe": {"waist": 800}}"#, "scenarios[0].probe"),
        (r#"{"kind": "trap-map", "points": "many"}"#, "scenarios[0].points"),
    ] {
        let cfg = write(tmp.path(), "bad.json", &format!(r#"{{"schema_version": 1, "scenarios": [{body}]}}"#));
        let o = qndsim(&["validate", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(stderr(&o).contains(field), "{body}: {}", stderr(&o));
    }
    let cfg = write(tmp.path(), "syntax.json", "{\n  \"schema_version\": 1,\n  \"scenarios\": [\n}");
    let o = qndsim(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let o = qndsim(&["validate", tmp.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn wrong_schema_version() {
    let err = parse(r#"{"schema_version": 7}"#, &[]).unwrap_err();
    assert!(matches!(err, CliError::Config(_)));
    assert_eq!(err.exit_code(), 2);
}

fn run_to(config: &str, out: &Path, extra: &[&str]) {
    let mut args = vec!["run", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qndsim(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn seeds_control_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = bundled("rabi.json");
    run_to(&cfg, &tmp.path().join("a"), &["--seed", "3"]);
    run_to(&cfg, &tmp.path().join("b"), &["--seed", "3"]);
    run_to(&cfg, &tmp.path().join("c"), &["--seed", "4"]);
    let (a, b, c) = (
        read_all(&tmp.path().join("a")),
        read_all(&tmp.path().join("b")),
        read_all(&tmp.path().join("c")),
    );
    assert_eq!(a, b);
    let trace = |files: &[(String, Vec<u8>)]| files.iter().find(|f| f.0 == "00-rabi-7-9gamma-trace.csv").unwrap().1.clone();
    assert_ne!(trace(&a), trace(&c));
}

#[test]
fn artifacts_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    run_to(&bundled("spin_echo.json"), tmp.path(), &[]);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 1);
    let artifacts = manifest["artifacts"].as_array().unwrap();
    assert_eq!(artifacts.len(), 3);
    for a in artifacts {
        assert!(tmp.path().join(a["file"].as_str().unwrap()).exists());
        assert_eq!(a["sha256"].as_str().unwrap().len(), 64);
    }
    let amps = fs::read_to_string(tmp.path().join("00-spin-echo-amplitudes.csv")).unwrap();
    assert_eq!(amps.lines().count(), 5);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("00-spin-echo-summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config_hash"], manifest["config_hash"]);
    assert!(summary["results"]["amplitudes"][0]["per_trace"].is_number());
}

#[test]
fn overrides_change_the_hash_but_seed_does_not() {
    let text = fs::read_to_string(bundled("rabi.json")).unwrap();
    let base = parse(&text, &[]).unwrap();
    let reseeded = parse(&text, &["seed=99".into()]).unwrap();
    let renamed = parse(&text, &["scenarios.0.name=other".into()]).unwrap();
    let changed = parse(&text, &["scenarios.0.probe.sideband_power_nw=120".into()]).unwrap();
    assert_eq!(reseeded.seed, 99);
    assert_eq!(config_hash(&base), config_hash(&reseeded));
    assert_eq!(config_hash(&base), config_hash(&renamed));
    assert_ne!(config_hash(&base), config_hash(&changed));

    let tmp = tempfile::tempdir().unwrap();
    run_to(
        &bundled("squeezing.json"),
        tmp.path(),
        &["--set", "scenarios.0.points=3", "--set", "scenarios.0.finesse=[1, 4]"],
    );
    let csv = fs::read_to_string(tmp.path().join("00-squeezing-squeezing.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let o = qndsim(&["validate", &bundled("squeezing.json"), "--set", "scenarios.0.finesse=[0.5]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("scenarios.0.finesse"));
}
