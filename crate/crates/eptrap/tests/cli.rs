use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eptrap(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eptrap")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eig_hermitian_two_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"model": {"kind": "two_level", "eps1": 1, "eps2": 2, "omega": 0}}"#);
    let o = eptrap(&["eig", &cfg], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let modes = v["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 2);
    let mut e: Vec<f64> = modes.iter().map(|m| m["energy"].as_f64().unwrap()).collect();
    e.sort_by(f64::total_cmp);
    assert_eq!(e, vec![1.0, 2.0]);
    for m in modes {
        assert_eq!(m["gamma"].as_f64().unwrap(), 0.0);
        assert!((m["r_k"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn ep_find_without_ep_is_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"kind": "two_level", "eps1": 1, "eps2": 2, "omega": 0.3},
            "ep": {"plane": ["eps1", "omega"], "guess": [1.0, 0.3]}}"#,
    );
    let o = eptrap(&["ep-find", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error: no-EP-found"), "{}", stderr(&o));
}

#[test]
fn ep_find_two_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"kind": "two_level", "eps1": 0, "eps2": [1, -0.5], "omega": 0.3},
            "ep": {"plane": "omega", "guess": [0.3, 0.2]}}"#,
    );
    let o = eptrap(&["ep-find", &cfg], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let p = &v["param"];
    let (re, im) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
    // omega = +-i (eps1 - eps2)/2
    let a = ((re - 0.25).powi(2) + (im - 0.5).powi(2)).sqrt();
    let b = ((re + 0.25).powi(2) + (im + 0.5).powi(2)).sqrt();
    assert!(a.min(b) < 1e-6, "{p}");
}

#[test]
fn bad_configs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{not json"),
        ("kind.json", r#"{"model": {"kind": "mystery"}}"#),
        ("field.json", r#"{"model": {"kind": "pt", "e": 0, "gamma": 1, "omega": 1, "extra": 2}}"#),
        ("chain.json", r#"{"model": {"kind": "toy_chain", "alpha": 1}}"#),
    ];
    for (name, text) in cases {
        let cfg = write(dir.path(), name, text);
        let o = eptrap(&["eig", &cfg], dir.path());
        assert_eq!(o.status.code(), Some(1), "{name}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error: config:"), "{name}: {}", stderr(&o));
    }
    let o = eptrap(&["eig", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = eptrap(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = eptrap(&["scenario", "trapping", "--set", "alpha_max"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn sweep_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"kind": "toy_chain", "n": 4, "alpha": 0},
            "grid": {"param": "alpha", "start": 0, "stop": 3, "samples": 31}}"#,
    );
    let a = eptrap(&["sweep", &cfg], dir.path());
    assert!(a.status.success(), "{}", stderr(&a));
    let b = eptrap(&["sweep", &cfg, "--out", "b.csv"], dir.path());
    assert!(b.status.success(), "{}", stderr(&b));
    assert_eq!(a.stdout, fs::read(dir.path().join("b.csv")).unwrap());

    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,branch,re_z,im_z,gamma,a_k,r_k"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 31 * 4);
    // width sum rule at every sample
    for chunk in rows.chunks(4) {
        let alpha = chunk[0][0];
        let sum: f64 = chunk.iter().map(|r| r[4]).sum();
        assert!((sum - 4.0 * alpha).abs() < 1e-10, "alpha {alpha}: {sum}");
    }
}

#[test]
fn observe_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"kind": "band", "e_b": [0], "gamma0": [[0.4]], "bands": [[-10, 10]], "energy": 0},
            "observables": {"series": ["transmission", "time_delay"], "energies": {"start": -1, "stop": 1, "samples": 2001}}}"#,
    );
    let o = eptrap(&["observe", &cfg, "--out", "obs", "--svg"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let listed = String::from_utf8(o.stdout).unwrap();
    assert!(listed.lines().count() >= 2, "{listed}");
    let obs = dir.path().join("obs");
    let mut csv = 0;
    let mut svg = 0;
    for e in fs::read_dir(&obs).unwrap() {
        let p = e.unwrap().path();
        match p.extension().and_then(|x| x.to_str()) {
            Some("csv") => {
                csv += 1;
                let text = fs::read_to_string(&p).unwrap();
                assert!(text.starts_with("# "));
                assert!(text.lines().any(|l| l == "x,value"));
            }
            Some("svg") => {
                svg += 1;
                assert!(fs::read_to_string(&p).unwrap().contains("<polyline"));
            }
            _ => {}
        }
    }
    assert_eq!(csv, 2);
    assert_eq!(svg, 2);
    // the recorded config reproduces the same files
    let again = eptrap(&["observe", "obs/manifest.json", "--out", "obs2"], dir.path());
    assert!(again.status.success(), "{}", stderr(&again));
    for e in fs::read_dir(dir.path().join("obs2")).unwrap() {
        let p = e.unwrap().path();
        if p.extension().and_then(|x| x.to_str()) == Some("csv") {
            assert_eq!(fs::read(&p).unwrap(), fs::read(obs.join(p.file_name().unwrap())).unwrap());
        }
    }
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().and_then(|x| x.to_str()) == Some("csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn scenario_bundle_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let o = eptrap(&["scenario", "trapping", "--out", "run1"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let run1 = dir.path().join("run1");
    let manifest: Value = serde_json::from_str(&fs::read_to_string(run1.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "trapping");
    assert_eq!(manifest["passed"], true);
    let assertions: Value = serde_json::from_str(&fs::read_to_string(run1.join("assertions.json")).unwrap()).unwrap();
    assert!(assertions.as_array().map_or(false, |a| !a.is_empty()), "{assertions}");
    let first = csv_files(&run1);
    assert!(!first.is_empty());

    let o = eptrap(&["scenario", "--manifest", "run1/manifest.json", "--out", "run2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(first, csv_files(&dir.path().join("run2")));
    assert_eq!(
        fs::read(run1.join("manifest.json")).unwrap(),
        fs::read(dir.path().join("run2/manifest.json")).unwrap()
    );
}

#[test]
fn every_scenario_passes() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["trapping", "three-resonance", "phase-lapse", "spin-swap", "pt", "observer"] {
        let o = eptrap(&["scenario", name, "--out", name], dir.path());
        assert!(o.status.success(), "{name}: {} {}", stderr(&o), String::from_utf8_lossy(&o.stdout));
        assert!(dir.path().join(name).join("manifest.json").exists());
    }
}

#[test]
fn unknown_scenario_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = eptrap(&["scenario", "nonesuch"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
