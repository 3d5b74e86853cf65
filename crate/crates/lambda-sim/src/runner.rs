//! Executes a [`RunConfig`] and writes its outputs: a replayable
//! `run.manifest`, a `metrics.json`, and one CSV per requested quantity.
//! Identical configurations produce byte-identical outputs.

use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::adiabatic::{
    build_characteristic_table, first_pass_area, matched_r, predict_peak_depth, predicted_fwhm,
    recurrence_markers, regenerated_peak, solve_adiabatic, RecurrenceMarkers,
};
use crate::analysis::{
    compare_engines, extract_grids, flux_deviation, norm_residual, photon_accounting, ScalarGrid,
};
use crate::config::{set_param, RunConfig, RunMode};
use crate::error::{Error, Result};
use crate::integrator::propagate;
use crate::model::EngineKind;

/// Run one configuration, writing into its `out_dir` (default `out`).
pub fn run(cfg: &RunConfig) -> Result<()> {
    let out = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"));
    run_into(cfg, &out)
}

/// Same as [`run`] but with the output directory given explicitly, ignoring
/// `cfg.out_dir`.
pub fn run_into(cfg: &RunConfig, out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("run.manifest"), cfg.to_manifest())?;
    match cfg.mode {
        RunMode::Adiabatic => run_single(cfg, out, EngineKind::Adiabatic),
        RunMode::Numeric => run_single(cfg, out, EngineKind::Numeric),
        RunMode::Compare => run_compare(cfg, out),
        RunMode::Markers => run_markers(cfg, out),
        RunMode::Sweep => run_sweep(cfg, out),
    }
}

/// Scorecard for a single-engine run.
#[derive(Debug, Serialize)]
struct EngineMetrics {
    engine: EngineKind,
    flux_deviation: f64,
    /// Only the direct solver accumulates norm error worth reporting.
    norm_residual: Option<f64>,
    markers: RecurrenceMarkers,
    first_pass_area: f64,
    peak_depth_predicted: f64,
    predicted_fwhm: Option<f64>,
    photon_absorbed: Option<f64>,
    photon_stored: Option<f64>,
}

fn run_single(cfg: &RunConfig, out: &Path, engine: EngineKind) -> Result<()> {
    let p = &cfg.params;
    let g = &cfg.grid;
    let sol = match engine {
        EngineKind::Adiabatic => solve_adiabatic(p, g)?,
        EngineKind::Numeric => propagate(p, g, &cfg.settings)?,
    };
    let table = build_characteristic_table(p, g)?;
    let markers = recurrence_markers(p, p.z_max, &table)?;
    let photons = photon_accounting(&sol, cfg.resolved_t_q()).ok();
    let metrics = EngineMetrics {
        engine,
        flux_deviation: flux_deviation(&sol),
        norm_residual: match engine {
            EngineKind::Numeric => Some(norm_residual(&sol)),
            EngineKind::Adiabatic => None,
        },
        markers,
        first_pass_area: first_pass_area(p),
        peak_depth_predicted: predict_peak_depth(p),
        predicted_fwhm: predicted_fwhm(p).ok(),
        photon_absorbed: photons.map(|x| x.0),
        photon_stored: photons.map(|x| x.1),
    };
    write_json(&out.join("metrics.json"), &metrics)?;
    for q in &cfg.quantities {
        let grid = extract_grids(&sol, *q);
        write_csv(&out.join(format!("{q}.csv")), &grid)?;
    }
    Ok(())
}

fn run_compare(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (num, adi, report) =
        compare_engines(&cfg.params, &cfg.grid, &cfg.settings, cfg.resolved_t_q())?;
    write_json(&out.join("metrics.json"), &report)?;
    for q in &cfg.quantities {
        write_csv(
            &out.join(format!("{q}_numeric.csv")),
            &extract_grids(&num, *q),
        )?;
        write_csv(
            &out.join(format!("{q}_adiabatic.csv")),
            &extract_grids(&adi, *q),
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct MarkerMetrics {
    markers: RecurrenceMarkers,
    first_pass_area: f64,
    v_infinity: f64,
    peak_depth_predicted: f64,
    predicted_fwhm: Option<f64>,
    matched_recur_ratio: Option<f64>,
    regenerated_peak_abs: Option<f64>,
}

fn run_markers(cfg: &RunConfig, out: &Path) -> Result<()> {
    let p = &cfg.params;
    let table = build_characteristic_table(p, &cfg.grid)?;
    let markers = recurrence_markers(p, p.z_max, &table)?;
    let metrics = MarkerMetrics {
        markers,
        first_pass_area: first_pass_area(p),
        v_infinity: table.v_infinity,
        peak_depth_predicted: predict_peak_depth(p),
        predicted_fwhm: predicted_fwhm(p).ok(),
        matched_recur_ratio: matched_r(p, p.z_max).ok(),
        regenerated_peak_abs: regenerated_peak(p, &markers).ok().map(|c| c.norm()),
    };
    write_json(&out.join("metrics.json"), &metrics)
}

fn run_sweep(cfg: &RunConfig, out: &Path) -> Result<()> {
    let Some(param) = cfg.sweep_param.clone() else {
        return Err(Error::Config {
            key: "sweep_param".into(),
            reason: "required for sweep mode".into(),
        });
    };
    if cfg.sweep_values.is_empty() {
        return Err(Error::Config {
            key: "sweep_values".into(),
            reason: "required for sweep mode".into(),
        });
    }
    let mut jobs = Vec::new();
    for &v in &cfg.sweep_values {
        let mut sub = cfg.clone();
        set_param(&mut sub.params, &param, v)?;
        sub.mode = match cfg.sweep_mode {
            EngineKind::Adiabatic => RunMode::Adiabatic,
            EngineKind::Numeric => RunMode::Numeric,
        };
        sub.sweep_param = None;
        sub.sweep_values = Vec::new();
        sub.out_dir = None;
        jobs.push((out.join(format!("{param}={v:?}")), sub));
    }
    // At most two runs in flight; grids are memory-hungry.
    for chunk in jobs.chunks(2) {
        let results: Vec<Result<()>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|(dir, sub)| scope.spawn(move || run_into(sub, dir)))
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Measurement("sweep worker panicked".into())))
                })
                .collect()
        });
        for r in results {
            r?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Measurement(
        format!("could not serialize metrics: {e}"),
    ))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Row-major CSV, depth varying slowest. Axis columns keep full float
/// precision; values carry nine significant digits.
fn write_csv(path: &Path, grid: &ScalarGrid) -> Result<()> {
    let mut buf = String::with_capacity(24 + grid.values.len() * grid.times.len() * 44);
    buf.push_str("t_over_tau,z_cm,value\n");
    for (iz, row) in grid.values.iter().enumerate() {
        let z = grid.depths[iz];
        for (jt, v) in row.iter().enumerate() {
            writeln!(buf, "{:?},{:?},{:.8e}", grid.times[jt], z, v).unwrap();
        }
    }
    fs::write(path, buf)?;
    Ok(())
}
