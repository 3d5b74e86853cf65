//! Closed-form engine: dark-state atomic response plus the characteristic
//! transport of the probe/coupling split.
//!
//! The key objects are the two characteristic coordinates
//!
//! ```text
//! v(t) = integral from t_min to t of (|wc(0,t')|^2 + |wp(0,t')|^2) dt'
//! u(z) = kappa12_tau * z
//! ```
//!
//! In these coordinates the probe fraction of the total Rabi amplitude rides
//! along lines of constant v - u: the whole entry split pattern is delayed,
//! parked in the ground-state coherence while the fields are off, and pushed
//! out again by the delayed coupling pulse. `CharacteristicTable` tabulates
//! v and the entry split once; everything else is evaluation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{erf, integrate, QuadratureSettings};
use crate::model::{
    coupling_at_entry, entry_coupling_re, entry_probe_re, entry_slice, entry_total_rabi,
    probe_at_entry, EngineKind, FieldSlice, GridSpec, PhysParams, SolutionGrid,
};

fn sqrt_5pi_2() -> f64 {
    (2.5 * std::f64::consts::PI).sqrt()
}

fn sqrt_pi_2() -> f64 {
    (0.5 * std::f64::consts::PI).sqrt()
}

/// Entry intensity `wp^2 + wc^2`, the integrand of v.
fn entry_intensity(p: &PhysParams, t: f64) -> f64 {
    let wp = entry_probe_re(p, t);
    let wc = entry_coupling_re(p, t);
    wp * wp + wc * wc
}

/// Amplitude pair scaled to unit sum of squares to the last bit: the plain
/// divisions land within a couple of ulp, and one first-order inverse-norm
/// correction removes the rest.
fn normalize_pair(wp: f64, wc: f64, w: f64) -> (f64, f64) {
    let fp = wp / w;
    let fc = wc / w;
    let corr = 1.5 - 0.5 * (fp * fp + fc * fc);
    (fp * corr, fc * corr)
}

/// Total v-area of the probe plus the first coupling pulse:
/// `C^2 sqrt(5 pi / 2) + P^2 sqrt(pi / 2)`. The delayed pulse needs to sweep
/// this much area past a depth to push the stored pattern fully out.
pub fn first_pass_area(p: &PhysParams) -> f64 {
    p.omega_c0_tau * p.omega_c0_tau * sqrt_5pi_2()
        + p.omega_p0_tau * p.omega_p0_tau * sqrt_pi_2()
}

/// Integrated entry intensity from `t_min` to `t` by adaptive quadrature of
/// the exact profiles (the Gaussian cross term included).
pub fn v_of_t(t: f64, t_min: f64, p: &PhysParams, q: &QuadratureSettings) -> Result<f64> {
    if t < t_min {
        return Err(Error::OutOfRange {
            what: "time t",
            value: t,
            lo: t_min,
            hi: f64::INFINITY,
        });
    }
    // Split into unit-width segments so the seed sampling of the adaptive
    // rule cannot step over a pulse on a wide interval.
    let n_seg = ((t - t_min).ceil() as usize).max(1);
    let seg_q = QuadratureSettings {
        abs_tol: q.abs_tol / n_seg as f64,
        max_depth: q.max_depth,
    };
    let f = |x: f64| entry_intensity(p, x);
    let mut total = 0.0;
    let mut a = t_min;
    for i in 0..n_seg {
        let b = if i == n_seg - 1 {
            t
        } else {
            t_min + (t - t_min) * (i + 1) as f64 / n_seg as f64
        };
        total += integrate(&f, a, b, &seg_q)?;
        a = b;
    }
    Ok(total)
}

/// Closed-form approximation of v during the delayed coupling pulse:
/// `S + (R^2/2) C^2 sqrt(5 pi/2) (1 + erf(sqrt(2/5) (t - t_d)))`.
/// Neglects the probe tail and the overlap cross term; kept separate from
/// [`v_of_t`] so the approximation error stays measurable.
pub fn v_recurrence_approx(t: f64, p: &PhysParams) -> f64 {
    let r2 = p.recur_ratio * p.recur_ratio;
    let c2 = p.omega_c0_tau * p.omega_c0_tau;
    first_pass_area(p)
        + 0.5 * r2 * c2 * sqrt_5pi_2() * (1.0 + erf((2.0f64 / 5.0).sqrt() * (t - p.recur_center)))
}

/// Integrated propagation constant `kappa12_tau * z` for a uniform medium.
/// Depths beyond the cell are legitimate here: the matched-readout analysis
/// evaluates u at virtual depths past z_max.
pub fn u_of_z(z: f64, p: &PhysParams) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::OutOfRange {
            what: "depth z",
            value: z,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(p.kappa12_tau * z)
}

/// Tabulation of v(t) and the entry amplitude split against the time grid.
///
/// `wp_samples[j]` and `wc_samples[j]` hold the probe and coupling fractions
/// of the total Rabi amplitude at entry, `wp(0,t)/W(0,t)` and `wc(0,t)/W(0,t)`;
/// where the total vanishes (within `1e-12` of the coupling scale) the last
/// defined pair is carried forward, because the stored coherence freezes the
/// split there. v is accumulated panel by panel with adaptive quadrature.
#[derive(Debug, Clone)]
pub struct CharacteristicTable {
    params: PhysParams,
    times: Vec<f64>,
    dt: f64,
    /// Monotone nondecreasing v values at the grid's time nodes; starts at 0.
    pub v_samples: Vec<f64>,
    /// Probe amplitude fraction at matching v values.
    pub wp_samples: Vec<f64>,
    /// Coupling amplitude fraction at matching v values.
    pub wc_samples: Vec<f64>,
    /// Entry intensity at the nodes (the derivative of v).
    intensity: Vec<f64>,
    /// Total v over the whole window.
    pub v_infinity: f64,
    frac_threshold: f64,
}

/// Build the transport table for the grid's time window.
pub fn build_characteristic_table(p: &PhysParams, g: &GridSpec) -> Result<CharacteristicTable> {
    p.validate()?;
    g.validate(p)?;
    let times = g.times();
    let n = times.len();
    let threshold = 1e-12 * p.omega_c0_tau;

    let intensity: Vec<f64> = times.iter().map(|&t| entry_intensity(p, t)).collect();

    let panel_q = QuadratureSettings {
        abs_tol: QuadratureSettings::default().abs_tol / (n - 1) as f64,
        max_depth: QuadratureSettings::default().max_depth,
    };
    let f = |x: f64| entry_intensity(p, x);
    let mut v_samples = Vec::with_capacity(n);
    v_samples.push(0.0);
    for j in 0..n - 1 {
        let inc = integrate(&f, times[j], times[j + 1], &panel_q)?.max(0.0);
        let prev = v_samples[j];
        v_samples.push(prev + inc);
    }
    let v_infinity = *v_samples.last().unwrap();

    let mut wp_samples = vec![0.0f64; n];
    let mut wc_samples = vec![0.0f64; n];
    let mut last_defined: Option<(f64, f64)> = None;
    let mut first_defined: Option<usize> = None;
    for j in 0..n {
        let wp = entry_probe_re(p, times[j]);
        let wc = entry_coupling_re(p, times[j]);
        let w = wp.hypot(wc);
        if w >= threshold {
            let (fp, fc) = normalize_pair(wp, wc, w);
            wp_samples[j] = fp;
            wc_samples[j] = fc;
            last_defined = Some((fp, fc));
            first_defined.get_or_insert(j);
        } else if let Some((fp, fc)) = last_defined {
            wp_samples[j] = fp;
            wc_samples[j] = fc;
        }
    }
    let Some(first) = first_defined else {
        return Err(Error::DegenerateTable(format!(
            "entry fields stay below {threshold:.3e} everywhere in [{}, {}]",
            g.t_min, g.t_max
        )));
    };
    // Leading nodes before the fields first rise take the earliest defined
    // split (the coupling-dominated limit).
    for j in 0..first {
        wp_samples[j] = wp_samples[first];
        wc_samples[j] = wc_samples[first];
    }

    Ok(CharacteristicTable {
        params: p.clone(),
        dt: g.dt(),
        times,
        v_samples,
        wp_samples,
        wc_samples,
        intensity,
        v_infinity,
        frac_threshold: threshold,
    })
}

impl CharacteristicTable {
    pub fn t_min(&self) -> f64 {
        self.times[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// v at an arbitrary time, accelerated by the tabulation: the stored
    /// value at the nearest node to the left plus a short quadrature.
    pub fn v_at(&self, t: f64) -> Result<f64> {
        let t_min = self.t_min();
        if t < t_min {
            return Err(Error::OutOfRange {
                what: "time t",
                value: t,
                lo: t_min,
                hi: f64::INFINITY,
            });
        }
        let n = self.times.len();
        let t_max = self.t_max();
        let q = QuadratureSettings {
            abs_tol: 1e-12,
            max_depth: 48,
        };
        if t >= t_max {
            if t == t_max {
                return Ok(self.v_infinity);
            }
            let tail = v_of_t(t, t_max, &self.params, &QuadratureSettings::default())?;
            return Ok(self.v_infinity + tail);
        }
        let j = (((t - t_min) / self.dt) as usize).min(n - 2);
        if t == self.times[j] {
            return Ok(self.v_samples[j]);
        }
        let f = |x: f64| entry_intensity(&self.params, x);
        Ok(self.v_samples[j] + integrate(&f, self.times[j], t, &q)?)
    }

    /// Cubic Hermite inversion of v within one table cell; the endpoint
    /// intensities supply exact slopes, so the model error is O(dt^4) in v.
    /// Returns the cell's left edge when v is flat across it.
    fn invert_fast(&self, x: f64) -> f64 {
        let k = self.v_samples.partition_point(|&v| v < x);
        if k == 0 {
            return self.times[0];
        }
        if k >= self.v_samples.len() {
            return self.t_max();
        }
        self.invert_in_cell(k - 1, x)
    }

    fn invert_in_cell(&self, j: usize, x: f64) -> f64 {
        let v0 = self.v_samples[j];
        let v1 = self.v_samples[j + 1];
        let dv = v1 - v0;
        if dv <= f64::MIN_POSITIVE {
            return self.times[j];
        }
        let m0 = self.intensity[j] * self.dt;
        let m1 = self.intensity[j + 1] * self.dt;
        let target = x - v0;
        let mut s = (target / dv).clamp(0.0, 1.0);
        for _ in 0..8 {
            let s2 = s * s;
            let s3 = s2 * s;
            let h = (2.0 * s3 - 3.0 * s2 + 1.0) * v0
                + (s3 - 2.0 * s2 + s) * m0
                + (-2.0 * s3 + 3.0 * s2) * v1
                + (s3 - s2) * m1
                - v0;
            let hp = 6.0 * (s2 - s) * v0
                + (3.0 * s2 - 4.0 * s + 1.0) * m0
                + 6.0 * (s - s2) * v1
                + (3.0 * s2 - 2.0 * s) * m1;
            let step = (h - target) / hp.max(1e-3 * dv);
            s = (s - step).clamp(0.0, 1.0);
            if step.abs() < 1e-14 {
                break;
            }
        }
        self.times[j] + s * self.dt
    }

    /// Entry split fractions at an arbitrary time, honouring the plateau
    /// carry-forward where the fields are effectively off.
    fn fractions_at(&self, t: f64) -> (f64, f64) {
        let wp = entry_probe_re(&self.params, t);
        let wc = entry_coupling_re(&self.params, t);
        let w = wp.hypot(wc);
        if w >= self.frac_threshold {
            normalize_pair(wp, wc, w)
        } else {
            let j = (((t - self.t_min()) / self.dt) as usize).min(self.times.len() - 1);
            (self.wp_samples[j], self.wc_samples[j])
        }
    }

    /// Transported split at (z, t): the entry fractions evaluated where the
    /// characteristic through (z, t) left the entry face. This is the pure
    /// function of `v(t) - u(z)` that underlies both field and atomic output.
    fn transported_fractions(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            // The characteristic predates the window: vacuum probe.
            return (0.0, 1.0);
        }
        if x >= self.v_infinity {
            let j = self.times.len() - 1;
            return (self.wp_samples[j], self.wc_samples[j]);
        }
        let t_star = self.invert_fast(x);
        self.fractions_at(t_star)
    }
}

/// Smallest time with `v(t) >= target`: cell bisection on the tabulation,
/// then refinement against the quadrature-accurate v to |v - target| <= 1e-9.
/// Plateaus resolve to their leftmost time.
pub fn invert_v(table: &CharacteristicTable, target: f64) -> Result<f64> {
    if !(0.0..=table.v_infinity).contains(&target) {
        return Err(Error::OutOfRange {
            what: "v target",
            value: target,
            lo: 0.0,
            hi: table.v_infinity,
        });
    }
    if target == 0.0 {
        return Ok(table.t_min());
    }
    let k = table.v_samples.partition_point(|&v| v < target);
    if k >= table.v_samples.len() {
        return Ok(table.t_max());
    }
    // Bracket [lo, hi] with v(lo) < target <= v(hi).
    let mut lo = table.times[k - 1];
    let mut hi = table.times[k];
    let mut t = table.invert_in_cell(k - 1, target);
    for _ in 0..200 {
        let vt = table.v_at(t)?;
        let g = vt - target;
        if g.abs() <= 1e-9 {
            return Ok(t);
        }
        if g < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
        // Newton with the exact derivative, safeguarded by the bracket.
        let slope = entry_intensity(&table.params, t);
        let newton = t - g / slope;
        t = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(hi)
}

/// Both field envelopes at (z, t) from the characteristic solution.
///
/// With equal propagation constants the total Rabi amplitude at depth equals
/// the entry amplitude at the same retarded time and only the split is
/// transported. With unequal constants the coupling field is taken through
/// unchanged, which is tenable only for a weak probe (enforced as
/// `omega_p0_tau <= 0.1 omega_c0_tau`).
pub fn fields_at(
    z: f64,
    t: f64,
    p: &PhysParams,
    table: &CharacteristicTable,
) -> Result<(Complex64, Complex64)> {
    debug_assert!(p == &table.params, "table built for different parameters");
    check_branch(p)?;
    if z == 0.0 {
        return Ok((probe_at_entry(t, p), coupling_at_entry(t, p)));
    }
    let x = table.v_at(t)? - u_of_z(z, p)?;
    let (fp, fc) = table.transported_fractions(x);
    let w0 = entry_total_rabi(p, t);
    let wp = Complex64::new(w0 * fp, 0.0);
    let wc = if p.equal_kappas() {
        Complex64::new(w0 * fc, 0.0)
    } else {
        coupling_at_entry(t, p)
    };
    Ok((wp, wc))
}

fn check_branch(p: &PhysParams) -> Result<()> {
    if !p.equal_kappas() && p.omega_p0_tau > 0.1 * p.omega_c0_tau {
        return Err(Error::Applicability(format!(
            "unequal kappas need a weak probe: omega_p0_tau = {} exceeds 0.1 * omega_c0_tau = {}",
            p.omega_p0_tau,
            0.1 * p.omega_c0_tau
        )));
    }
    Ok(())
}

/// Dark-state atomic amplitudes at (z, t): `A1 = wc/W`, `A3 = -wp/W`, and the
/// first-order correction `A2` from the time derivative of the split,
/// evaluated by centred differences with the table's grid step (one-sided at
/// the window edges). On plateaus the frozen split carries through and A2 is
/// zero.
pub fn atomic_state_adiabatic(
    z: f64,
    t: f64,
    p: &PhysParams,
    table: &CharacteristicTable,
) -> Result<(Complex64, Complex64, Complex64)> {
    let split = |tt: f64| -> Result<(f64, f64)> {
        if z == 0.0 {
            return Ok(table.fractions_at(tt));
        }
        let x = table.v_at(tt)? - u_of_z(z, p)?;
        Ok(table.transported_fractions(x))
    };
    check_branch(p)?;
    let (fp, fc) = split(t)?;
    let a1 = Complex64::new(fc, 0.0);
    let a3 = Complex64::new(-fp, 0.0);

    let dt = table.dt();
    let (t_lo, t_hi) = (
        (t - dt).max(table.t_min()),
        // v_at extends past t_max, so only the lower edge needs clamping.
        t + dt,
    );
    let (fp_lo, fc_lo) = split(t_lo)?;
    let (fp_hi, fc_hi) = split(t_hi)?;
    let span = t_hi - t_lo;

    let w0 = entry_total_rabi(p, t);
    let (wp, wc) = (w0 * fp, w0 * fc);
    let a2 = if wp.max(wc) < table.frac_threshold {
        Complex64::new(0.0, 0.0)
    } else if wp >= wc {
        let da1 = (fc_hi - fc_lo) / span;
        Complex64::new(0.0, -1.0) * da1 / wp
    } else {
        let da3 = (fp_lo - fp_hi) / span;
        Complex64::new(0.0, -1.0) * da3 / wc
    };
    Ok((a1, a2, a3))
}

/// Fill the whole grid from the characteristic solution.
pub fn solve_adiabatic(p: &PhysParams, g: &GridSpec) -> Result<SolutionGrid> {
    p.check_adiabatic_applicable()?;
    check_branch(p)?;
    let table = build_characteristic_table(p, g)?;
    Ok(solve_adiabatic_with_table(p, g, &table))
}

/// Grid fill when the table has already been built (engine comparisons reuse
/// one table for markers and the grid).
pub fn solve_adiabatic_with_table(
    p: &PhysParams,
    g: &GridSpec,
    table: &CharacteristicTable,
) -> SolutionGrid {
    let times = g.times();
    let n_t = times.len();
    let depths = g.depths(p.z_max);
    let equal = p.equal_kappas();
    let dt = g.dt();

    let wp0: Vec<f64> = times.iter().map(|&t| entry_probe_re(p, t)).collect();
    let wc0: Vec<f64> = times.iter().map(|&t| entry_coupling_re(p, t)).collect();
    let w0: Vec<f64> = (0..n_t).map(|j| wp0[j].hypot(wc0[j])).collect();

    let mut slices = Vec::with_capacity(depths.len());
    for (iz, &z) in depths.iter().enumerate() {
        let u = p.kappa12_tau * z;
        let mut omega_p = Vec::with_capacity(n_t);
        let mut omega_c = Vec::with_capacity(n_t);
        let mut a1 = Vec::with_capacity(n_t);
        let mut a3 = Vec::with_capacity(n_t);
        let mut cell = 0usize;
        for j in 0..n_t {
            let (fp, fc) = if iz == 0 {
                (table.wp_samples[j], table.wc_samples[j])
            } else {
                let x = table.v_samples[j] - u;
                if x <= 0.0 {
                    (0.0, 1.0)
                } else if x >= table.v_infinity {
                    (
                        *table.wp_samples.last().unwrap(),
                        *table.wc_samples.last().unwrap(),
                    )
                } else {
                    while table.v_samples[cell + 1] < x {
                        cell += 1;
                    }
                    let t_star = table.invert_in_cell(cell, x);
                    table.fractions_at(t_star)
                }
            };
            if iz == 0 {
                // The entry face reproduces the boundary profiles exactly.
                omega_p.push(Complex64::new(wp0[j], 0.0));
                omega_c.push(Complex64::new(wc0[j], 0.0));
            } else {
                omega_p.push(Complex64::new(w0[j] * fp, 0.0));
                omega_c.push(Complex64::new(
                    if equal { w0[j] * fc } else { wc0[j] },
                    0.0,
                ));
            }
            a1.push(Complex64::new(fc, 0.0));
            a3.push(Complex64::new(-fp, 0.0));
        }
        let a2 = a2_row(&omega_p, &omega_c, &a1, &a3, dt, table.frac_threshold);
        slices.push(FieldSlice {
            z,
            omega_p_tau: omega_p,
            omega_c_tau: omega_c,
            a1,
            a2,
            a3,
        });
    }
    SolutionGrid {
        engine: EngineKind::Adiabatic,
        params: p.clone(),
        grid: g.clone(),
        slices,
    }
}

/// A2 along one depth row by finite differences of the dark-state pair,
/// dividing by whichever field is larger for stability; both forms agree
/// identically because the pair is normalized.
fn a2_row(
    omega_p: &[Complex64],
    omega_c: &[Complex64],
    a1: &[Complex64],
    a3: &[Complex64],
    dt: f64,
    threshold: f64,
) -> Vec<Complex64> {
    let n = a1.len();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut a2 = Vec::with_capacity(n);
    for j in 0..n {
        let (lo, hi) = (j.saturating_sub(1), (j + 1).min(n - 1));
        let span = (hi - lo) as f64 * dt;
        let wp = omega_p[j].norm();
        let wc = omega_c[j].norm();
        let val = if wp.max(wc) < threshold {
            Complex64::new(0.0, 0.0)
        } else if wp >= wc {
            minus_i * (a1[hi] - a1[lo]) / span / omega_p[j]
        } else {
            minus_i * (a3[hi] - a3[lo]) / span / omega_c[j]
        };
        a2.push(val);
    }
    a2
}

/// Depth at which the stored coherence peaks: half the first-pass area in
/// units of the propagation constant.
pub fn predict_peak_depth(p: &PhysParams) -> f64 {
    first_pass_area(p) / (2.0 * p.kappa12_tau)
}

/// Whether a time marker falls while the original pulse pair is still
/// passing or during the delayed-pulse readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerPhase {
    FirstPass,
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeMarker {
    pub time: f64,
    pub phase: MarkerPhase,
}

/// Onset, peak, and completion times of the probe pattern's transit past a
/// given depth, defined by v crossing u, u + S/2, and u + S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct RecurrenceMarkers {
    pub t_r1: Option<TimeMarker>,
    pub t_rm: Option<TimeMarker>,
    pub t_r2: Option<TimeMarker>,
}

impl RecurrenceMarkers {
    pub fn all_present(&self) -> bool {
        self.t_r1.is_some() && self.t_rm.is_some() && self.t_r2.is_some()
    }
}

/// Solve the three marker equations at depth `z_m` by inverting the exact v.
/// A marker is absent when its target area never accumulates inside the
/// window (delayed pulse too weak or cell too deep). Markers that fall while
/// the original pulse pair is still passing are tagged `FirstPass`.
pub fn recurrence_markers(
    p: &PhysParams,
    z_m: f64,
    table: &CharacteristicTable,
) -> Result<RecurrenceMarkers> {
    debug_assert!(p == &table.params, "table built for different parameters");
    let u = u_of_z(z_m, p)?;
    let s = first_pass_area(p);
    let mut out = RecurrenceMarkers::default();
    for (slot, target) in [(0usize, u), (1, u + 0.5 * s), (2, u + s)] {
        if target > table.v_infinity {
            continue;
        }
        let time = invert_v(table, target)?;
        let phase = if target < s {
            MarkerPhase::FirstPass
        } else {
            MarkerPhase::Recurrence
        };
        let marker = Some(TimeMarker { time, phase });
        match slot {
            0 => out.t_r1 = marker,
            1 => out.t_rm = marker,
            _ => out.t_r2 = marker,
        }
    }
    Ok(out)
}

/// Peak amplitude of the regenerated probe pulse:
/// `R C exp(-(t_rm - t_d)^2 / 5) * P / sqrt(C^2 + P^2)`.
pub fn regenerated_peak(p: &PhysParams, markers: &RecurrenceMarkers) -> Result<Complex64> {
    let Some(t_rm) = markers.t_rm else {
        return Err(Error::Applicability(
            "regenerated peak needs the t_rm marker, which is absent".into(),
        ));
    };
    let d = t_rm.time - p.recur_center;
    let w = p.omega_p0_tau.hypot(p.omega_c0_tau);
    Ok(Complex64::new(
        p.recur_ratio * p.omega_c0_tau * (-d * d / 5.0).exp() * p.omega_p0_tau / w,
        0.0,
    ))
}

/// Delayed-pulse amplitude ratio that centres the readout on the stored
/// pattern's peak at depth `z_m`: solves
/// `P^2 sqrt(pi/8) + C^2 sqrt(5 pi/8) (1 + R^2) = kappa12_tau * z_m`.
pub fn matched_r(p: &PhysParams, z_m: f64) -> Result<f64> {
    let lhs_base = p.omega_p0_tau * p.omega_p0_tau * (std::f64::consts::PI / 8.0).sqrt()
        + p.omega_c0_tau * p.omega_c0_tau * (5.0 * std::f64::consts::PI / 8.0).sqrt();
    let coeff = p.omega_c0_tau * p.omega_c0_tau * (5.0 * std::f64::consts::PI / 8.0).sqrt();
    let rhs = u_of_z(z_m, p)?;
    let r2 = (rhs - lhs_base) / coeff;
    if r2 < 0.0 {
        return Err(Error::Applicability(format!(
            "no matched readout ratio: kappa12_tau * z_m = {rhs} falls short of the \
             first-pass requirement {lhs_base}"
        )));
    }
    Ok(r2.sqrt())
}

/// Closed-form width estimate of the regenerated pulse:
/// `sqrt(5 pi/2) / R^2 * (1 + (1/sqrt 5) (P/C)^2)`.
pub fn predicted_fwhm(p: &PhysParams) -> Result<f64> {
    if p.recur_ratio <= 0.0 {
        return Err(Error::Applicability(
            "width estimate needs a delayed coupling pulse (recur_ratio > 0)".into(),
        ));
    }
    let ratio = p.omega_p0_tau / p.omega_c0_tau;
    Ok(sqrt_5pi_2() / (p.recur_ratio * p.recur_ratio)
        * (1.0 + ratio * ratio / 5.0f64.sqrt()))
}

/// Entry slice with the dark-state amplitudes attached; convenience for
/// diagnostics that want boundary data in solver form.
pub fn entry_slice_with_state(p: &PhysParams, g: &GridSpec) -> Result<FieldSlice> {
    let table = build_characteristic_table(p, g)?;
    let mut s = entry_slice(p, g);
    let n = s.len();
    s.a1 = (0..n)
        .map(|j| Complex64::new(table.wc_samples[j], 0.0))
        .collect();
    s.a3 = (0..n)
        .map(|j| Complex64::new(-table.wp_samples[j], 0.0))
        .collect();
    s.a2 = a2_row(
        &s.omega_p_tau,
        &s.omega_c_tau,
        &s.a1,
        &s.a3,
        g.dt(),
        1e-12 * p.omega_c0_tau,
    );
    Ok(s)
}
