//! End-to-end tests of the `lambda-sim` binary: argument handling, exit
//! codes, and the on-disk layout of a run directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lambda-sim"))
}

/// Fresh scratch directory under the system temp dir, unique per test name.
fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir()
        .join("lambda-sim-cli-tests")
        .join(format!("{name}-{}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A quick adiabatic run on a deliberately tiny grid.
fn tiny_run_args(out: &Path) -> Vec<String> {
    vec![
        "adiabatic".into(),
        "--n_t=96".into(),
        "--n_z=3".into(),
        "--z_max=0.5".into(),
        "--quantities=probe,a3".into(),
        "--out".into(),
        out.display().to_string(),
    ]
}

#[test]
fn adiabatic_run_writes_documented_layout() {
    let dir = tmp("layout");
    let out = bin().args(tiny_run_args(&dir)).output().unwrap();
    assert!(
        out.status.success(),
        "run failed: {}",
        stderr_of(&out)
    );

    let manifest = fs::read_to_string(dir.join("run.manifest")).unwrap();
    assert!(manifest.contains("mode = adiabatic"), "{manifest}");
    assert!(manifest.contains("n_t = 96"), "{manifest}");

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["engine"], "adiabatic");

    for name in ["probe.csv", "a3.csv"] {
        let csv = fs::read_to_string(dir.join(name)).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t_over_tau,z_cm,value"), "{name}");
        // header + one row per (z, t) grid point
        assert_eq!(csv.lines().count(), 1 + 96 * 3, "{name}");
    }
}

#[test]
fn outputs_are_byte_deterministic() {
    let (d1, d2) = (tmp("det-a"), tmp("det-b"));
    for d in [&d1, &d2] {
        let out = bin().args(tiny_run_args(d)).output().unwrap();
        assert!(out.status.success(), "{}", stderr_of(&out));
    }
    for name in ["probe.csv", "a3.csv", "metrics.json"] {
        assert_eq!(
            fs::read(d1.join(name)).unwrap(),
            fs::read(d2.join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn manifest_round_trip_reproduces_run() {
    let (d1, d2) = (tmp("rt-a"), tmp("rt-b"));
    let out = bin().args(tiny_run_args(&d1)).output().unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));

    // The emitted manifest must be a loadable config that reproduces the run.
    let out = bin()
        .arg("adiabatic")
        .arg("--config")
        .arg(d1.join("run.manifest"))
        .arg("--out")
        .arg(&d2)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));

    for name in ["probe.csv", "a3.csv", "metrics.json"] {
        assert_eq!(
            fs::read(d1.join(name)).unwrap(),
            fs::read(d2.join(name)).unwrap(),
            "{name} differs after manifest round trip"
        );
    }
    // Manifests agree except for the output directory they echo.
    let strip = |p: PathBuf| -> String {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("out_dir"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(d1.join("run.manifest")), strip(d2.join("run.manifest")));
}

#[test]
fn flag_overrides_win_over_config_file() {
    let dir = tmp("override");
    let cfg = dir.join("base.cfg");
    fs::write(
        &cfg,
        "# comment lines and blanks are ignored\n\nn_t = 96\nn_z = 3\nz_max = 0.7\n",
    )
    .unwrap();
    let out = bin()
        .arg("adiabatic")
        .arg("--config")
        .arg(&cfg)
        .arg("--z_max=0.5")
        .arg("--quantities=probe")
        .arg("--out")
        .arg(dir.join("run"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    let manifest = fs::read_to_string(dir.join("run").join("run.manifest")).unwrap();
    assert!(manifest.contains("n_t = 96"), "{manifest}");
    assert!(manifest.contains("z_max = 0.5"), "{manifest}");
}

#[test]
fn unknown_key_is_rejected_by_name() {
    let dir = tmp("badkey");
    let out = bin()
        .args(["adiabatic", "--bogus=3", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn missing_mode_prints_usage() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("usage:"));
}

#[test]
fn unknown_mode_prints_usage() {
    let out = bin().arg("warp").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("usage:"));
}

#[test]
fn coarse_numeric_grid_fails_with_guard_error() {
    let dir = tmp("guard");
    // Default fields have peak Rabi frequency ~80/tau; 64 points across 22 tau
    // leaves dt far too coarse for the atomic integrator's guard.
    let out = bin()
        .args(["numeric", "--n_t=64", "--n_z=3", "--z_max=0.5", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("dt"), "{err}");
}
