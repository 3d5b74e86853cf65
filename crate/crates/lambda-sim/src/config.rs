//! Flat key=value run configuration, shared by the config file format, the
//! command-line overrides and the emitted run manifest. One format, three
//! uses, so a manifest can be replayed as a config file verbatim.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::analysis::GridQuantity;
use crate::error::{Error, Result};
use crate::integrator::IntegratorSettings;
use crate::model::{EngineKind, GridSpec, PhysParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// Closed-form engine only.
    Adiabatic,
    /// Direct integration only.
    Numeric,
    /// Both engines plus the comparison report.
    Compare,
    /// Transit markers and closed-form predictions, no grids.
    Markers,
    /// One engine re-run over a list of parameter values.
    Sweep,
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::Adiabatic => "adiabatic",
            RunMode::Numeric => "numeric",
            RunMode::Compare => "compare",
            RunMode::Markers => "markers",
            RunMode::Sweep => "sweep",
        })
    }
}

impl FromStr for RunMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adiabatic" => Ok(RunMode::Adiabatic),
            "numeric" => Ok(RunMode::Numeric),
            "compare" => Ok(RunMode::Compare),
            "markers" => Ok(RunMode::Markers),
            "sweep" => Ok(RunMode::Sweep),
            other => Err(format!(
                "unknown mode '{other}' (expected adiabatic, numeric, compare, markers or sweep)"
            )),
        }
    }
}

/// Names of the physical parameters a sweep may vary.
pub const SWEEPABLE_PARAMS: [&str; 9] = [
    "omega_p0_tau",
    "omega_c0_tau",
    "gamma2_tau",
    "delta_tau",
    "kappa12_tau",
    "kappa32_tau",
    "recur_ratio",
    "recur_center",
    "z_max",
];

/// Set one physical parameter by its key name.
pub fn set_param(p: &mut PhysParams, key: &str, v: f64) -> Result<()> {
    match key {
        "omega_p0_tau" => p.omega_p0_tau = v,
        "omega_c0_tau" => p.omega_c0_tau = v,
        "gamma2_tau" => p.gamma2_tau = v,
        "delta_tau" => p.delta_tau = v,
        "kappa12_tau" => p.kappa12_tau = v,
        "kappa32_tau" => p.kappa32_tau = v,
        "recur_ratio" => p.recur_ratio = v,
        "recur_center" => p.recur_center = v,
        "z_max" => p.z_max = v,
        other => {
            return Err(Error::Config {
                key: other.to_string(),
                reason: "not a physical parameter".into(),
            })
        }
    }
    Ok(())
}

/// Everything one invocation needs. Built from defaults, then a config file,
/// then command-line overrides, in that order of precedence (later wins).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub out_dir: Option<PathBuf>,
    pub quantities: Vec<GridQuantity>,
    pub params: PhysParams,
    pub grid: GridSpec,
    pub settings: IntegratorSettings,
    /// Quiescent sampling time; defaults to the middle of the gap between
    /// the first-pass pulses and the delayed pulse.
    pub t_q: Option<f64>,
    pub sweep_param: Option<String>,
    pub sweep_values: Vec<f64>,
    pub sweep_mode: EngineKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: RunMode::Compare,
            out_dir: None,
            quantities: vec![GridQuantity::Probe, GridQuantity::Coupling, GridQuantity::A3],
            params: PhysParams::default(),
            grid: GridSpec::default(),
            settings: IntegratorSettings::default(),
            t_q: None,
            sweep_param: None,
            sweep_values: Vec::new(),
            sweep_mode: EngineKind::Adiabatic,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Config {
        key: key.to_string(),
        reason: format!("expected a number, got '{v}'"),
    })
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| Error::Config {
        key: key.to_string(),
        reason: format!("expected a positive integer, got '{v}'"),
    })
}

impl RunConfig {
    /// Apply one key=value pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |reason: String| Error::Config {
            key: key.to_string(),
            reason,
        };
        match key {
            "mode" => self.mode = value.parse().map_err(bad)?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "quantities" => {
                let mut qs = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    qs.push(part.parse::<GridQuantity>().map_err(bad)?);
                }
                if qs.is_empty() {
                    return Err(bad("no quantities listed".into()));
                }
                self.quantities = qs;
            }
            "gamma2_tau" | "delta_tau" | "omega_p0_tau" | "omega_c0_tau" | "kappa12_tau"
            | "kappa32_tau" | "recur_ratio" | "recur_center" | "z_max" => {
                set_param(&mut self.params, key, parse_f64(key, value)?)?;
            }
            "t_min" => self.grid.t_min = parse_f64(key, value)?,
            "t_max" => self.grid.t_max = parse_f64(key, value)?,
            "n_t" => self.grid.n_t = parse_usize(key, value)?,
            "n_z" => self.grid.n_z = parse_usize(key, value)?,
            "time_scheme" => self.settings.time_scheme = value.parse().map_err(bad)?,
            "z_scheme" => self.settings.z_scheme = value.parse().map_err(bad)?,
            "norm_tolerance" => self.settings.norm_tolerance = parse_f64(key, value)?,
            "t_substeps" => self.settings.t_substeps = parse_usize(key, value)?,
            "z_substeps" => self.settings.z_substeps = parse_usize(key, value)?,
            "t_q" => self.t_q = Some(parse_f64(key, value)?),
            "sweep_param" => {
                if !SWEEPABLE_PARAMS.contains(&value) {
                    return Err(bad(format!(
                        "'{value}' is not sweepable (choose one of {})",
                        SWEEPABLE_PARAMS.join(", ")
                    )));
                }
                self.sweep_param = Some(value.to_string());
            }
            "sweep_values" => {
                let mut vs = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    vs.push(parse_f64(key, part)?);
                }
                if vs.is_empty() {
                    return Err(bad("no sweep values listed".into()));
                }
                self.sweep_values = vs;
            }
            "sweep_mode" => {
                self.sweep_mode = match value {
                    "adiabatic" => EngineKind::Adiabatic,
                    "numeric" => EngineKind::Numeric,
                    other => {
                        return Err(bad(format!(
                            "unknown engine '{other}' (expected adiabatic or numeric)"
                        )))
                    }
                }
            }
            other => {
                return Err(Error::Config {
                    key: other.to_string(),
                    reason: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// Load key=value lines from a file. '#' starts a comment; blank lines
    /// are skipped.
    pub fn load(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    key: format!("{}:{}", path.display(), lineno + 1),
                    reason: format!("expected key=value, got '{line}'"),
                });
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.load(path)?;
        Ok(cfg)
    }

    /// Quiescent sampling time, resolved.
    pub fn resolved_t_q(&self) -> f64 {
        self.t_q.unwrap_or(0.5 * (5.0 + self.params.recur_center))
    }

    /// Serialize the full effective configuration in the same key=value
    /// format the loader reads, floats rendered exactly.
    pub fn to_manifest(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("mode", self.mode.to_string());
        if let Some(dir) = &self.out_dir {
            kv("out_dir", dir.display().to_string());
        }
        kv(
            "quantities",
            self.quantities
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        let p = &self.params;
        kv("omega_p0_tau", format!("{:?}", p.omega_p0_tau));
        kv("omega_c0_tau", format!("{:?}", p.omega_c0_tau));
        kv("gamma2_tau", format!("{:?}", p.gamma2_tau));
        kv("delta_tau", format!("{:?}", p.delta_tau));
        kv("kappa12_tau", format!("{:?}", p.kappa12_tau));
        kv("kappa32_tau", format!("{:?}", p.kappa32_tau));
        kv("recur_ratio", format!("{:?}", p.recur_ratio));
        kv("recur_center", format!("{:?}", p.recur_center));
        kv("z_max", format!("{:?}", p.z_max));
        kv("t_min", format!("{:?}", self.grid.t_min));
        kv("t_max", format!("{:?}", self.grid.t_max));
        kv("n_t", self.grid.n_t.to_string());
        kv("n_z", self.grid.n_z.to_string());
        kv("time_scheme", self.settings.time_scheme.to_string());
        kv("z_scheme", self.settings.z_scheme.to_string());
        kv("norm_tolerance", format!("{:?}", self.settings.norm_tolerance));
        kv("t_substeps", self.settings.t_substeps.to_string());
        kv("z_substeps", self.settings.z_substeps.to_string());
        kv("t_q", format!("{:?}", self.resolved_t_q()));
        if let Some(param) = &self.sweep_param {
            kv("sweep_param", param.clone());
            kv(
                "sweep_values",
                self.sweep_values
                    .iter()
                    .map(|v| format!("{v:?}"))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            kv("sweep_mode", self.sweep_mode.to_string());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::ZScheme;

    #[test]
    fn defaults_resolve_the_quiescent_time_between_pulse_groups() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.resolved_t_q(), 8.0);
        let mut cfg2 = cfg.clone();
        cfg2.set("recur_center", "15").unwrap();
        assert_eq!(cfg2.resolved_t_q(), 10.0);
        cfg2.set("t_q", "7.25").unwrap();
        assert_eq!(cfg2.resolved_t_q(), 7.25);
    }

    #[test]
    fn keys_reach_their_fields() {
        let mut cfg = RunConfig::default();
        cfg.set("mode", "sweep").unwrap();
        cfg.set("omega_p0_tau", "2.5").unwrap();
        cfg.set("n_t", "1024").unwrap();
        cfg.set("z_scheme", "midpoint").unwrap();
        cfg.set("quantities", "probe,a3").unwrap();
        cfg.set("sweep_param", "recur_ratio").unwrap();
        cfg.set("sweep_values", "1, 2, 4").unwrap();
        cfg.set("sweep_mode", "numeric").unwrap();
        assert_eq!(cfg.mode, RunMode::Sweep);
        assert_eq!(cfg.params.omega_p0_tau, 2.5);
        assert_eq!(cfg.grid.n_t, 1024);
        assert_eq!(cfg.settings.z_scheme, ZScheme::Midpoint);
        assert_eq!(
            cfg.quantities,
            vec![GridQuantity::Probe, GridQuantity::A3]
        );
        assert_eq!(cfg.sweep_param.as_deref(), Some("recur_ratio"));
        assert_eq!(cfg.sweep_values, vec![1.0, 2.0, 4.0]);
        assert_eq!(cfg.sweep_mode, EngineKind::Numeric);
    }

    #[test]
    fn unknown_and_malformed_keys_are_named_in_the_error() {
        let mut cfg = RunConfig::default();
        match cfg.set("omega_p0", "1.0") {
            Err(Error::Config { key, .. }) => assert_eq!(key, "omega_p0"),
            other => panic!("expected config error, got {other:?}"),
        }
        match cfg.set("n_t", "many") {
            Err(Error::Config { key, .. }) => assert_eq!(key, "n_t"),
            other => panic!("expected config error, got {other:?}"),
        }
        assert!(cfg.set("sweep_param", "tau").is_err());
        assert!(cfg.set("quantities", "phase").is_err());
        assert!(cfg.set("mode", "both").is_err());
    }

    #[test]
    fn config_files_support_comments_and_blank_lines() {
        let dir = std::env::temp_dir().join("lambda-sim-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(
            &path,
            "# storage run\nmode = numeric\n\nomega_c0_tau = 18  # weaker coupling\nn_z = 41\n",
        )
        .unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.mode, RunMode::Numeric);
        assert_eq!(cfg.params.omega_c0_tau, 18.0);
        assert_eq!(cfg.grid.n_z, 41);
        std::fs::write(&path, "mode: numeric\n").unwrap();
        assert!(RunConfig::from_file(&path).is_err());
    }

    #[test]
    fn manifest_round_trips_through_the_loader() {
        let mut cfg = RunConfig::default();
        cfg.set("mode", "sweep").unwrap();
        cfg.set("omega_p0_tau", "0.3333333333333333").unwrap();
        cfg.set("norm_tolerance", "2.5e-8").unwrap();
        cfg.set("recur_center", "10.7").unwrap();
        cfg.set("sweep_param", "z_max").unwrap();
        cfg.set("sweep_values", "0.5,1.25,3.0").unwrap();
        let manifest = cfg.to_manifest();

        let dir = std::env::temp_dir().join("lambda-sim-manifest-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.manifest");
        std::fs::write(&path, &manifest).unwrap();
        let back = RunConfig::from_file(&path).unwrap();

        assert_eq!(back.mode, cfg.mode);
        assert_eq!(back.params, cfg.params);
        assert_eq!(back.grid, cfg.grid);
        assert_eq!(back.settings, cfg.settings);
        assert_eq!(back.quantities, cfg.quantities);
        assert_eq!(back.sweep_param, cfg.sweep_param);
        assert_eq!(back.sweep_values, cfg.sweep_values);
        assert_eq!(back.resolved_t_q(), cfg.resolved_t_q());
        // Emitting again reproduces the same bytes.
        assert_eq!(back.to_manifest(), manifest);
    }
}
