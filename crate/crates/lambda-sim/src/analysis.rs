//! Measurements on solution grids and the engine-against-engine comparison.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::adiabatic::{
    build_characteristic_table, predict_peak_depth, predicted_fwhm, recurrence_markers,
    solve_adiabatic_with_table, CharacteristicTable, RecurrenceMarkers,
};
use crate::error::{Error, Result};
use crate::integrator::{propagate, IntegratorSettings};
use crate::model::{flux_f, GridSpec, PhysParams, SolutionGrid};

/// Worst relative drift of the photon flux from its entry value, over the
/// whole grid, normalized by the peak entry flux. The flux should ride along
/// unchanged; any drift is numerical error of the depth march.
pub fn flux_deviation(sol: &SolutionGrid) -> f64 {
    let p = &sol.params;
    let entry = &sol.slices[0];
    let n_t = sol.grid.n_t;
    let entry_flux: Vec<f64> = (0..n_t)
        .map(|j| flux_f(entry.omega_p_tau[j], entry.omega_c_tau[j], p))
        .collect();
    let peak = entry_flux.iter().cloned().fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for slice in &sol.slices {
        for ((wp, wc), f0) in slice
            .omega_p_tau
            .iter()
            .zip(&slice.omega_c_tau)
            .zip(&entry_flux)
        {
            let f = flux_f(*wp, *wc, p);
            worst = worst.max((f - f0).abs());
        }
    }
    worst / peak
}

/// Worst |population norm - 1| over the grid. Meaningful for lossless runs;
/// with decay switched on the norm legitimately shrinks.
pub fn norm_residual(sol: &SolutionGrid) -> f64 {
    let mut worst = 0.0f64;
    for slice in &sol.slices {
        for j in 0..slice.a1.len().min(slice.a2.len()).min(slice.a3.len()) {
            let n = slice.a1[j].norm_sqr() + slice.a2[j].norm_sqr() + slice.a3[j].norm_sqr();
            worst = worst.max((n - 1.0).abs());
        }
    }
    worst
}

/// Time span in which both entry pulse groups are effectively off: from the
/// point where the first coupling pulse has fallen to 1% of its peak, to one
/// pulse width before the delayed pulse has risen back to 1%. This is the
/// storage window; inside it the probe should be extinguished and the
/// pattern parked in the ground-state coherence. `None` when there is no
/// delayed pulse or the pulses overlap too much to leave a gap.
pub fn dark_interval(p: &PhysParams) -> Option<(f64, f64)> {
    if p.recur_ratio <= 0.0 {
        return None;
    }
    // exp(-t^2/5) = 0.01 at t = sqrt(5 ln 100); the probe dies earlier.
    let edge = (5.0 * 100.0f64.ln()).sqrt();
    let t_off = edge;
    let t_on = p.recur_center - edge;
    if t_on - 1.0 <= t_off {
        return None;
    }
    Some((t_off, t_on - 1.0))
}

/// FWHM of a sampled nonnegative profile by linear interpolation of the
/// half-level crossings. Errors unless the window contains exactly one local
/// maximum reaching half of the peak, with the half level crossed on both
/// sides; anything else means the window does not isolate a single pulse.
fn fwhm_of_profile(times: &[f64], vals: &[f64]) -> Result<f64> {
    let n = vals.len();
    if n < 3 {
        return Err(Error::Measurement(
            "window too narrow to hold a pulse".into(),
        ));
    }
    let (mut jm, mut peak) = (0usize, f64::NEG_INFINITY);
    for (j, &v) in vals.iter().enumerate() {
        if v > peak {
            peak = v;
            jm = j;
        }
    }
    if !(peak > 0.0) {
        return Err(Error::Measurement("profile is identically zero".into()));
    }
    if jm == 0 || jm == n - 1 {
        return Err(Error::Measurement(format!(
            "peak sits on the window edge at t = {}",
            times[jm]
        )));
    }
    let half = 0.5 * peak;
    let mut maxima_above_half = 0;
    for j in 1..n - 1 {
        if vals[j] > vals[j - 1] && vals[j] >= vals[j + 1] && vals[j] >= half {
            maxima_above_half += 1;
        }
    }
    if maxima_above_half != 1 {
        return Err(Error::Measurement(format!(
            "{maxima_above_half} half-height maxima in the window; need exactly one"
        )));
    }
    let cross = |mut j: usize, step: isize| -> Result<f64> {
        loop {
            let next = j as isize + step;
            if next < 0 || next as usize >= n {
                return Err(Error::Measurement(
                    "half level never crossed inside the window".into(),
                ));
            }
            let k = next as usize;
            if vals[k] < half {
                let frac = (vals[j] - half) / (vals[j] - vals[k]);
                return Ok(times[j] + frac * (times[k] - times[j]));
            }
            j = k;
        }
    };
    let left = cross(jm, -1)?;
    let right = cross(jm, 1)?;
    Ok(right - left)
}

/// Measure the probe pulse's FWHM at depth `z` inside the given time window.
/// Returns (amplitude width, intensity width); the intensity width is
/// narrower by roughly sqrt 2 for near-Gaussian pulses.
pub fn measure_fwhm(sol: &SolutionGrid, z: f64, window: (f64, f64)) -> Result<(f64, f64)> {
    let iz = sol.depth_index(z)?;
    let times = sol.times();
    let slice = &sol.slices[iz];
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::Measurement(format!(
            "empty measurement window [{lo}, {hi}]"
        )));
    }
    let idx: Vec<usize> = (0..times.len())
        .filter(|&j| times[j] >= lo && times[j] <= hi)
        .collect();
    let t_win: Vec<f64> = idx.iter().map(|&j| times[j]).collect();
    let amp: Vec<f64> = idx.iter().map(|&j| slice.omega_p_tau[j].norm()).collect();
    let int: Vec<f64> = idx
        .iter()
        .map(|&j| slice.omega_p_tau[j].norm_sqr())
        .collect();
    Ok((
        fwhm_of_profile(&t_win, &amp)?,
        fwhm_of_profile(&t_win, &int)?,
    ))
}

/// Photon bookkeeping for a storage run: integrated probe flux lost between
/// the entry and exit faces up to the quiescent time `t_q`, against the
/// excitation parked in the medium at that moment. Returns
/// `(absorbed, stored)` with
///
/// ```text
/// absorbed = integral dt [ |wp(0,t)|^2 - |wp(L,t)|^2 ],  t <= t_q
/// stored   = kappa12_tau * integral dz |A3(z, t_q)|^2
/// ```
///
/// The two agree when nothing is decaying and the fields are quiet at `t_q`.
pub fn photon_accounting(sol: &SolutionGrid, t_q: f64) -> Result<(f64, f64)> {
    let jq = sol.time_index(t_q)?;
    if jq < 1 {
        return Err(Error::Measurement(
            "quiescent time sits at the start of the window".into(),
        ));
    }
    let entry = &sol.slices[0];
    let exit = sol.slices.last().unwrap();
    let dt = sol.grid.dt();
    let mut absorbed = 0.0;
    for j in 0..=jq {
        let d = entry.omega_p_tau[j].norm_sqr() - exit.omega_p_tau[j].norm_sqr();
        let w = if j == 0 || j == jq { 0.5 } else { 1.0 };
        absorbed += w * d * dt;
    }
    let depths = sol.depths();
    let dz = sol.grid.dz(sol.params.z_max);
    let mut stored = 0.0;
    for (iz, slice) in sol.slices.iter().enumerate() {
        let w = if iz == 0 || iz == depths.len() - 1 {
            0.5
        } else {
            1.0
        };
        stored += w * slice.a3[jq].norm_sqr() * dz;
    }
    Ok((absorbed, sol.params.kappa12_tau * stored))
}

/// Scalar field magnitudes on a solution grid, selectable for export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridQuantity {
    Probe,
    Coupling,
    A1,
    A2,
    A3,
}

impl fmt::Display for GridQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridQuantity::Probe => "probe",
            GridQuantity::Coupling => "coupling",
            GridQuantity::A1 => "a1",
            GridQuantity::A2 => "a2",
            GridQuantity::A3 => "a3",
        })
    }
}

impl FromStr for GridQuantity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "probe" => Ok(GridQuantity::Probe),
            "coupling" => Ok(GridQuantity::Coupling),
            "a1" => Ok(GridQuantity::A1),
            "a2" => Ok(GridQuantity::A2),
            "a3" => Ok(GridQuantity::A3),
            other => Err(format!(
                "unknown quantity '{other}' (expected probe, coupling, a1, a2 or a3)"
            )),
        }
    }
}

/// Magnitude of one quantity over the whole grid, rows indexed by depth.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarGrid {
    pub quantity: GridQuantity,
    pub times: Vec<f64>,
    pub depths: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn extract_grids(sol: &SolutionGrid, quantity: GridQuantity) -> ScalarGrid {
    let pick = |s: &crate::model::FieldSlice, j: usize| -> Complex64 {
        match quantity {
            GridQuantity::Probe => s.omega_p_tau[j],
            GridQuantity::Coupling => s.omega_c_tau[j],
            GridQuantity::A1 => s.a1[j],
            GridQuantity::A2 => s.a2[j],
            GridQuantity::A3 => s.a3[j],
        }
    };
    let n_t = sol.grid.n_t;
    let values = sol
        .slices
        .iter()
        .map(|s| (0..n_t).map(|j| pick(s, j).norm()).collect())
        .collect();
    ScalarGrid {
        quantity,
        times: sol.times(),
        depths: sol.depths(),
        values,
    }
}

/// Side-by-side scorecard of the direct solution against the closed-form
/// one, plus the closed-form predictions evaluated at the cell's far face.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    /// Largest |probe difference| anywhere on the grid.
    pub max_abs_probe_error: f64,
    /// Largest relative probe difference where the closed-form amplitude is
    /// significant (above 0.1).
    pub rel_error_where_significant: f64,
    /// Flux drift of the direct solution.
    pub flux_deviation: f64,
    /// Norm drift of the direct solution.
    pub norm_residual: f64,
    /// Probe width at the far face measured inside the readout window, when
    /// a clean single pulse is there to measure.
    pub measured_fwhm_amplitude: Option<f64>,
    pub measured_fwhm_intensity: Option<f64>,
    pub predicted_fwhm: Option<f64>,
    /// Transit markers at the far face.
    pub markers: RecurrenceMarkers,
    /// Depth where the stored |A3| actually peaks, sampled mid-storage.
    pub peak_depth_measured: f64,
    pub peak_depth_predicted: f64,
}

/// Time at which the comparison samples the stored pattern: the middle of
/// the dark interval, or the caller's quiescent time when there is none.
fn snapshot_time(p: &PhysParams, t_q: f64) -> f64 {
    dark_interval(p).map_or(t_q, |(a, b)| 0.5 * (a + b))
}

/// Compare a direct and a closed-form solution computed on the same grid.
pub fn compare_solutions(
    num: &SolutionGrid,
    adi: &SolutionGrid,
    table: &CharacteristicTable,
    t_q: f64,
) -> Result<ComparisonReport> {
    if num.grid != adi.grid {
        return Err(Error::Measurement(
            "solutions live on different grids".into(),
        ));
    }
    let p = &num.params;
    let n_t = num.grid.n_t;

    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    for (sn, sa) in num.slices.iter().zip(&adi.slices) {
        for j in 0..n_t {
            let d = (sn.omega_p_tau[j] - sa.omega_p_tau[j]).norm();
            max_abs = max_abs.max(d);
            let reference = sa.omega_p_tau[j].norm();
            if reference > 0.1 {
                max_rel = max_rel.max(d / reference);
            }
        }
    }

    let markers = recurrence_markers(p, p.z_max, table)?;
    let mut fwhm_amp = None;
    let mut fwhm_int = None;
    if let (Some(tm), Some(t2)) = (markers.t_rm, markers.t_r2) {
        // Window bracketing the readout lobe: symmetric about t_rm on the
        // left, half a marker spacing of slack on the right.
        let win = (
            2.0 * tm.time - t2.time,
            t2.time + 0.5 * (t2.time - tm.time),
        );
        if let Ok((a, i)) = measure_fwhm(num, p.z_max, win) {
            fwhm_amp = Some(a);
            fwhm_int = Some(i);
        }
    }

    let t_snap = snapshot_time(p, t_q);
    let j_snap = num.time_index(t_snap)?;
    let depths = num.depths();
    let mut best = (0usize, f64::NEG_INFINITY);
    for (iz, slice) in num.slices.iter().enumerate() {
        let v = slice.a3[j_snap].norm();
        if v > best.1 {
            best = (iz, v);
        }
    }

    Ok(ComparisonReport {
        max_abs_probe_error: max_abs,
        rel_error_where_significant: max_rel,
        flux_deviation: flux_deviation(num),
        norm_residual: norm_residual(num),
        measured_fwhm_amplitude: fwhm_amp,
        measured_fwhm_intensity: fwhm_int,
        predicted_fwhm: predicted_fwhm(p).ok(),
        markers,
        peak_depth_measured: depths[best.0],
        peak_depth_predicted: predict_peak_depth(p),
    })
}

/// Run both engines on one grid and compare. Returns the two solutions so
/// callers can export them alongside the report.
pub fn compare_engines(
    p: &PhysParams,
    g: &GridSpec,
    s: &IntegratorSettings,
    t_q: f64,
) -> Result<(SolutionGrid, SolutionGrid, ComparisonReport)> {
    p.check_adiabatic_applicable()?;
    let table = build_characteristic_table(p, g)?;
    let adi = solve_adiabatic_with_table(p, g, &table);
    let num = propagate(p, g, s)?;
    let report = compare_solutions(&num, &adi, &table, t_q)?;
    Ok((num, adi, report))
}
