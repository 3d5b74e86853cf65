//! Problem definition: medium parameters, entry pulse shapes, simulation
//! grids, and the containers the solvers fill in.
//!
//! All quantities are dimensionless. Times are measured in units of the probe
//! pulse width tau (`x = t/tau`), Rabi frequencies as `Omega * tau`, and the
//! coupling constants `kappa12_tau`, `kappa32_tau` carry the only dimensional
//! unit left, per centimetre of propagation depth.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Medium, entry-pulse, and cell parameters.
///
/// The probe enters as a unit-width Gaussian `P exp(-x^2)`; the coupling
/// field as a wider pair `C (exp(-0.2 x^2) + R exp(-0.2 (x - x0)^2))` whose
/// second member, delayed by `recur_center`, reads the probe pulse back out
/// of the atomic coherence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysParams {
    /// Probe peak Rabi frequency at entry, times tau.
    pub omega_p0_tau: f64,
    /// Coupling Rabi amplitude at entry, times tau.
    pub omega_c0_tau: f64,
    /// Decay rate of the intermediate state, times tau.
    pub gamma2_tau: f64,
    /// One-photon detuning, times tau.
    pub delta_tau: f64,
    /// Probe-transition propagation constant, times tau, per cm.
    pub kappa12_tau: f64,
    /// Coupling-transition propagation constant, times tau, per cm.
    pub kappa32_tau: f64,
    /// Amplitude ratio of the delayed coupling pulse to the first.
    pub recur_ratio: f64,
    /// Centre of the delayed coupling pulse.
    pub recur_center: f64,
    /// Cell length in cm.
    pub z_max: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            omega_p0_tau: 5.0,
            omega_c0_tau: 20.0,
            gamma2_tau: 0.0,
            delta_tau: 0.0,
            kappa12_tau: 200.0,
            kappa32_tau: 200.0,
            recur_ratio: 4.0,
            recur_center: 11.0,
            z_max: 3.0,
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        let positive: [(&str, f64); 5] = [
            ("omega_p0_tau", self.omega_p0_tau),
            ("omega_c0_tau", self.omega_c0_tau),
            ("kappa12_tau", self.kappa12_tau),
            ("kappa32_tau", self.kappa32_tau),
            ("z_max", self.z_max),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParam {
                    name,
                    constraint: "must be finite and > 0",
                    value: v,
                });
            }
        }
        if !(self.gamma2_tau >= 0.0) {
            return Err(Error::InvalidParam {
                name: "gamma2_tau",
                constraint: "must be >= 0",
                value: self.gamma2_tau,
            });
        }
        if !(self.recur_ratio >= 0.0) {
            return Err(Error::InvalidParam {
                name: "recur_ratio",
                constraint: "must be >= 0",
                value: self.recur_ratio,
            });
        }
        for (name, v) in [
            ("delta_tau", self.delta_tau),
            ("recur_center", self.recur_center),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParam {
                    name,
                    constraint: "must be finite",
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Soft diagnostics: conditions that degrade accuracy without making the
    /// problem ill-posed. The CLI prints these to stderr.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.omega_c0_tau < 5.0 {
            w.push(format!(
                "omega_c0_tau = {} is small; the dark-state following that the \
                 closed-form engine assumes needs omega_c0_tau >> 1",
                self.omega_c0_tau
            ));
        }
        w
    }

    /// Whether the closed-form engine applies: it is the resonant theory,
    /// valid while the detuning stays below the coupling Rabi frequency.
    pub fn check_adiabatic_applicable(&self) -> Result<()> {
        if self.delta_tau.abs() >= self.omega_c0_tau {
            return Err(Error::Applicability(format!(
                "|delta_tau| = {} must stay below omega_c0_tau = {} for the \
                 closed-form engine",
                self.delta_tau.abs(),
                self.omega_c0_tau
            )));
        }
        Ok(())
    }

    pub(crate) fn equal_kappas(&self) -> bool {
        (self.kappa12_tau - self.kappa32_tau).abs() <= 1e-12 * self.kappa12_tau.abs()
    }
}

pub(crate) fn entry_probe_re(p: &PhysParams, t: f64) -> f64 {
    p.omega_p0_tau * (-t * t).exp()
}

pub(crate) fn entry_coupling_re(p: &PhysParams, t: f64) -> f64 {
    let d = t - p.recur_center;
    p.omega_c0_tau * ((-0.2 * t * t).exp() + p.recur_ratio * (-0.2 * d * d).exp())
}

/// Entry probe envelope at scaled time `t` (real-valued by construction).
pub fn probe_at_entry(t: f64, p: &PhysParams) -> Complex64 {
    Complex64::new(entry_probe_re(p, t), 0.0)
}

/// Entry coupling envelope at scaled time `t` (real-valued by construction).
pub fn coupling_at_entry(t: f64, p: &PhysParams) -> Complex64 {
    Complex64::new(entry_coupling_re(p, t), 0.0)
}

/// Total Rabi amplitude `sqrt(wp^2 + wc^2)` of the entry fields.
pub(crate) fn entry_total_rabi(p: &PhysParams, t: f64) -> f64 {
    entry_probe_re(p, t).hypot(entry_coupling_re(p, t))
}

/// Largest total entry Rabi amplitude over the grid's time window.
pub fn peak_entry_rabi(p: &PhysParams, g: &GridSpec) -> f64 {
    let dt = g.dt();
    let mut peak = 0.0f64;
    for i in 0..g.n_t {
        peak = peak.max(entry_total_rabi(p, g.t_min + i as f64 * dt));
    }
    peak
}

/// Scaled photon flux `|wp|^2 + (kappa12/kappa32) |wc|^2`: the combination
/// the lossless medium carries through unchanged at fixed retarded time.
pub fn flux_f(omega_p_tau: Complex64, omega_c_tau: Complex64, p: &PhysParams) -> f64 {
    omega_p_tau.norm_sqr() + p.kappa12_tau / p.kappa32_tau * omega_c_tau.norm_sqr()
}

/// Rectangular simulation window: `n_t` retarded times spanning
/// [`t_min`, `t_max`] and `n_z` depths spanning [0, z_max] cm, endpoints
/// included. The depth extent comes from [`PhysParams::z_max`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub n_z: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_min: -6.0,
            t_max: 16.0,
            n_t: 4096,
            n_z: 601,
        }
    }
}

impl GridSpec {
    /// Structural checks plus the pulse-support requirement: the window must
    /// open before the probe rises and, when a delayed pulse exists, close
    /// after it has passed.
    pub fn validate(&self, p: &PhysParams) -> Result<()> {
        if !(self.t_max > self.t_min) {
            return Err(Error::InvalidParam {
                name: "t_max",
                constraint: "must exceed t_min",
                value: self.t_max,
            });
        }
        if self.n_t < 2 {
            return Err(Error::InvalidParam {
                name: "n_t",
                constraint: "must be >= 2",
                value: self.n_t as f64,
            });
        }
        if self.n_z < 2 {
            return Err(Error::InvalidParam {
                name: "n_z",
                constraint: "must be >= 2",
                value: self.n_z as f64,
            });
        }
        if self.t_min > -5.0 {
            return Err(Error::InvalidParam {
                name: "t_min",
                constraint: "must be <= -5 so the window contains the probe pulse",
                value: self.t_min,
            });
        }
        if p.recur_ratio > 0.0 && self.t_max < p.recur_center + 5.0 {
            return Err(Error::InvalidParam {
                name: "t_max",
                constraint: "must be >= recur_center + 5 so the window contains the delayed pulse",
                value: self.t_max,
            });
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn dz(&self, z_max: f64) -> f64 {
        z_max / (self.n_z - 1) as f64
    }

    /// Time nodes, endpoints included.
    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.n_t).map(|i| self.t_min + i as f64 * dt).collect()
    }

    /// Depth nodes over [0, z_max], endpoints included.
    pub fn depths(&self, z_max: f64) -> Vec<f64> {
        let dz = self.dz(z_max);
        (0..self.n_z).map(|i| i as f64 * dz).collect()
    }
}

/// Which solver produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    /// Characteristic-transport solution built on dark-state following.
    Adiabatic,
    /// Full field-matter integration of the coupled equations.
    Numeric,
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineKind::Adiabatic => f.write_str("adiabatic"),
            EngineKind::Numeric => f.write_str("numeric"),
        }
    }
}

impl std::str::FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adiabatic" => Ok(EngineKind::Adiabatic),
            "numeric" => Ok(EngineKind::Numeric),
            _ => Err(Error::Config {
                key: "engine".into(),
                reason: format!("unknown engine {s:?}, expected adiabatic or numeric"),
            }),
        }
    }
}

/// Field envelopes and atomic amplitudes over the time grid at one depth.
/// Solvers accept slices with empty amplitude arrays and return them filled.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSlice {
    /// Depth of this slice in cm.
    pub z: f64,
    pub omega_p_tau: Vec<Complex64>,
    pub omega_c_tau: Vec<Complex64>,
    pub a1: Vec<Complex64>,
    pub a2: Vec<Complex64>,
    pub a3: Vec<Complex64>,
}

impl FieldSlice {
    /// A fields-only slice (amplitudes empty, to be filled by a solver).
    pub fn from_fields(z: f64, omega_p_tau: Vec<Complex64>, omega_c_tau: Vec<Complex64>) -> Self {
        FieldSlice {
            z,
            omega_p_tau,
            omega_c_tau,
            a1: Vec::new(),
            a2: Vec::new(),
            a3: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.omega_p_tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_p_tau.is_empty()
    }
}

/// Entry fields sampled on the grid's time axis.
pub fn entry_slice(p: &PhysParams, g: &GridSpec) -> FieldSlice {
    let times = g.times();
    let omega_p_tau = times.iter().map(|&t| probe_at_entry(t, p)).collect();
    let omega_c_tau = times.iter().map(|&t| coupling_at_entry(t, p)).collect();
    FieldSlice::from_fields(0.0, omega_p_tau, omega_c_tau)
}

/// Full space-time solution: one [`FieldSlice`] per depth node, ordered from
/// the entry face to z_max, plus the inputs that produced it.
#[derive(Debug, Clone)]
pub struct SolutionGrid {
    pub engine: EngineKind,
    pub params: PhysParams,
    pub grid: GridSpec,
    pub slices: Vec<FieldSlice>,
}

impl SolutionGrid {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn depths(&self) -> Vec<f64> {
        self.grid.depths(self.params.z_max)
    }

    /// Index of the depth node closest to `z`; must lie within half a step.
    pub fn depth_index(&self, z: f64) -> Result<usize> {
        nearest_index(0.0, self.grid.dz(self.params.z_max), self.grid.n_z, z, "depth z")
    }

    /// Index of the time node closest to `t`, within half a step.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        nearest_index(self.grid.t_min, self.grid.dt(), self.grid.n_t, t, "time t")
    }
}

fn nearest_index(lo: f64, step: f64, n: usize, x: f64, what: &'static str) -> Result<usize> {
    let hi = lo + step * (n - 1) as f64;
    if x < lo - 0.5 * step || x > hi + 0.5 * step {
        return Err(Error::OutOfRange {
            what,
            value: x,
            lo,
            hi,
        });
    }
    let i = ((x - lo) / step).round() as usize;
    Ok(i.min(n - 1))
}
