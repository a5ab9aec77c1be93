//! TOML run configuration. Frequencies are given in Hz (`ω/2π`) and converted
//! to rad/s on load; omitted keys keep their defaults.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dynamics::{EvolutionConfig, InitialState};
use crate::error::{Error, Result};
use crate::model::SystemParams;

#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    /// Kelvin.
    Temperature { min: f64, max: f64, steps: usize },
    /// `δ_c` in units of `ω_d`.
    DetuningC { min: f64, max: f64, steps: usize },
    /// `g_nc` in units of `ω_d`.
    CouplingNC { min: f64, max: f64, steps: usize },
    Time(EvolutionConfig),
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec::Temperature { min: 0.01, max: 0.25, steps: 49 }
    }
}

impl SweepSpec {
    /// Sweep values for the range kinds; `None` for a time run.
    pub fn values(&self) -> Option<Vec<f64>> {
        match *self {
            SweepSpec::Temperature { min, max, steps }
            | SweepSpec::DetuningC { min, max, steps }
            | SweepSpec::CouplingNC { min, max, steps } => Some(linspace(min, max, steps)),
            SweepSpec::Time(_) => None,
        }
    }
}

pub(crate) fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + h * i as f64 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeChoice {
    Homodyne,
    Heterodyne,
    Double00 { xi: f64, chi: f64 },
    Double11,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningOptions {
    /// Replace the configured detunings by the E_N-optimal grid point.
    pub optimize: bool,
    pub grid_steps: usize,
}

impl Default for DetuningOptions {
    fn default() -> Self {
        Self { optimize: false, grid_steps: 21 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub sweep: SweepSpec,
    pub schemes: Vec<SchemeChoice>,
    pub detuning: DetuningOptions,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            sweep: SweepSpec::default(),
            schemes: vec![
                SchemeChoice::Homodyne,
                SchemeChoice::Heterodyne,
                SchemeChoice::Double00 { xi: 0.0, chi: 0.0 },
                SchemeChoice::Double11,
            ],
            detuning: DetuningOptions::default(),
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn has(&self, pred: impl Fn(&SchemeChoice) -> bool) -> bool {
        self.schemes.iter().any(pred)
    }

    pub fn double00(&self) -> Option<(f64, f64)> {
        self.schemes.iter().find_map(|s| match *s {
            SchemeChoice::Double00 { xi, chi } => Some((xi, chi)),
            _ => None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        match &self.sweep {
            SweepSpec::Temperature { min, max, steps }
            | SweepSpec::DetuningC { min, max, steps }
            | SweepSpec::CouplingNC { min, max, steps } => {
                if *steps < 2 {
                    return Err(Error::validation(format!("sweep steps must be >= 2, got {steps}")));
                }
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return Err(Error::validation(format!(
                        "sweep range needs finite min < max, got [{min}, {max}]"
                    )));
                }
                let non_negative = matches!(
                    self.sweep,
                    SweepSpec::Temperature { .. } | SweepSpec::CouplingNC { .. }
                );
                if non_negative && *min < 0.0 {
                    return Err(Error::validation(format!("sweep min must be >= 0, got {min}")));
                }
            }
            SweepSpec::Time(evo) => evo.validate()?,
        }
        if self.schemes.is_empty() {
            return Err(Error::validation("schemes must not be empty"));
        }
        if let Some((xi, chi)) = self.double00() {
            if !(xi.is_finite() && chi.is_finite()) {
                return Err(Error::validation("double00 angles must be finite"));
            }
        }
        if self.detuning.grid_steps < 5 {
            return Err(Error::validation(format!(
                "detuning grid_steps must be >= 5, got {}",
                self.detuning.grid_steps
            )));
        }
        Ok(())
    }
}

const PARAM_KEYS: &[&str] = &[
    "omega_c_hz",
    "omega_n_hz",
    "omega_d_hz",
    "delta_c_hz",
    "delta_n_eff_hz",
    "lambda_c_hz",
    "lambda_n_hz",
    "gamma_d_hz",
    "g_nc_hz",
    "g_nd_eff_hz",
    "g_nd_bare_hz",
    "temperature_k",
    "drive_field_b0_t",
    "drive_freq_omega0_hz",
    "sphere_diameter_m",
    "spin_density_m3",
    "gyro_gamma_g_hz_per_t",
];
const SWEEP_KEYS: &[&str] = &[
    "kind",
    "min",
    "max",
    "steps",
    "t_end_s",
    "dt_s",
    "sample_every",
    "initial_state",
];
const DOUBLE00_KEYS: &[&str] = &["xi", "chi"];
const DETUNING_KEYS: &[&str] = &["optimize", "grid_steps"];
const OUTPUT_KEYS: &[&str] = &["path"];

#[derive(Deserialize, Default)]
struct RawConfig {
    #[serde(default)]
    params: RawParams,
    #[serde(default)]
    sweep: RawSweep,
    schemes: Option<Vec<String>>,
    #[serde(default)]
    double00: RawDouble00,
    #[serde(default)]
    detuning: RawDetuning,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Deserialize, Default)]
struct RawParams {
    omega_c_hz: Option<f64>,
    omega_n_hz: Option<f64>,
    omega_d_hz: Option<f64>,
    delta_c_hz: Option<f64>,
    delta_n_eff_hz: Option<f64>,
    lambda_c_hz: Option<f64>,
    lambda_n_hz: Option<f64>,
    gamma_d_hz: Option<f64>,
    g_nc_hz: Option<f64>,
    g_nd_eff_hz: Option<f64>,
    g_nd_bare_hz: Option<f64>,
    temperature_k: Option<f64>,
    drive_field_b0_t: Option<f64>,
    drive_freq_omega0_hz: Option<f64>,
    sphere_diameter_m: Option<f64>,
    spin_density_m3: Option<f64>,
    gyro_gamma_g_hz_per_t: Option<f64>,
}

#[derive(Deserialize, Default)]
struct RawSweep {
    kind: Option<String>,
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<i64>,
    t_end_s: Option<f64>,
    dt_s: Option<f64>,
    sample_every: Option<i64>,
    initial_state: Option<String>,
}

#[derive(Deserialize, Default)]
struct RawDouble00 {
    xi: Option<f64>,
    chi: Option<f64>,
}

#[derive(Deserialize, Default)]
struct RawDetuning {
    optimize: Option<bool>,
    grid_steps: Option<i64>,
}

#[derive(Deserialize, Default)]
struct RawOutput {
    path: Option<PathBuf>,
}

fn unknown_keys(table: &toml::Table) -> Vec<String> {
    let mut unknown = Vec::new();
    for (key, value) in table {
        let allowed = match key.as_str() {
            "params" => PARAM_KEYS,
            "sweep" => SWEEP_KEYS,
            "double00" => DOUBLE00_KEYS,
            "detuning" => DETUNING_KEYS,
            "output" => OUTPUT_KEYS,
            "schemes" => continue,
            _ => {
                unknown.push(key.clone());
                continue;
            }
        };
        if let toml::Value::Table(inner) = value {
            unknown.extend(
                inner
                    .keys()
                    .filter(|k| !allowed.contains(&k.as_str()))
                    .map(|k| format!("{key}.{k}")),
            );
        }
    }
    unknown
}

fn count(name: &str, v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::validation(format!("{name} must be >= 0, got {v}")))
}

/// Parses and validates a configuration from TOML text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let unknown = unknown_keys(&table);
    if !unknown.is_empty() {
        return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
    }
    let raw: RawConfig = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;

    let mut config = RunConfig::default();
    let p = &mut config.params;
    let rp = &raw.params;
    let hz = |v: Option<f64>, dst: &mut f64| {
        if let Some(v) = v {
            *dst = TAU * v;
        }
    };
    hz(rp.omega_c_hz, &mut p.omega_c);
    hz(rp.omega_n_hz, &mut p.omega_n);
    hz(rp.omega_d_hz, &mut p.omega_d);
    p.delta_c = rp.delta_c_hz.map_or(-p.omega_d, |v| TAU * v);
    p.delta_n_eff = rp.delta_n_eff_hz.map_or(p.omega_d, |v| TAU * v);
    hz(rp.lambda_c_hz, &mut p.lambda_c);
    hz(rp.lambda_n_hz, &mut p.lambda_n);
    hz(rp.gamma_d_hz, &mut p.gamma_d);
    hz(rp.g_nc_hz, &mut p.g_nc);
    hz(rp.g_nd_eff_hz, &mut p.g_nd_eff);
    hz(rp.g_nd_bare_hz, &mut p.g_nd_bare);
    p.drive_freq_omega0 = rp.drive_freq_omega0_hz.map_or(p.omega_n - p.omega_d, |v| TAU * v);
    hz(rp.gyro_gamma_g_hz_per_t, &mut p.gyro_gamma_g);
    p.temperature = rp.temperature_k.unwrap_or(p.temperature);
    p.drive_field_b0 = rp.drive_field_b0_t.unwrap_or(p.drive_field_b0);
    p.sphere_diameter = rp.sphere_diameter_m.unwrap_or(p.sphere_diameter);
    p.spin_density = rp.spin_density_m3.unwrap_or(p.spin_density);

    let rs = &raw.sweep;
    let kind = rs.kind.as_deref().unwrap_or("temperature");
    let range = |min: f64, max: f64, steps: usize| -> Result<(f64, f64, usize)> {
        let steps = match rs.steps {
            Some(s) => count("sweep.steps", s)?,
            None => steps,
        };
        Ok((rs.min.unwrap_or(min), rs.max.unwrap_or(max), steps))
    };
    config.sweep = match kind {
        "temperature" => {
            let (min, max, steps) = range(0.01, 0.25, 49)?;
            SweepSpec::Temperature { min, max, steps }
        }
        "detuning_c" => {
            let (min, max, steps) = range(-2.0, 2.0, 81)?;
            SweepSpec::DetuningC { min, max, steps }
        }
        "coupling_nc" => {
            let (min, max, steps) = range(0.0, 0.5, 51)?;
            SweepSpec::CouplingNC { min, max, steps }
        }
        "time" => {
            let mut evo = EvolutionConfig::default();
            evo.t_end = rs.t_end_s.unwrap_or(evo.t_end);
            evo.dt = rs.dt_s.unwrap_or(evo.dt);
            if let Some(n) = rs.sample_every {
                evo.sample_every = count("sweep.sample_every", n)?;
            }
            evo.initial_state = match rs.initial_state.as_deref() {
                None | Some("thermal_product") => InitialState::ThermalProduct,
                Some("vacuum_product") => InitialState::VacuumProduct,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "sweep.initial_state must be thermal_product or vacuum_product, got {other:?}"
                    )))
                }
            };
            SweepSpec::Time(evo)
        }
        other => {
            return Err(Error::Config(format!(
                "sweep.kind must be one of temperature, detuning_c, coupling_nc, time; got {other:?}"
            )))
        }
    };

    let (xi, chi) = (raw.double00.xi.unwrap_or(0.0), raw.double00.chi.unwrap_or(0.0));
    if let Some(names) = &raw.schemes {
        config.schemes = names
            .iter()
            .map(|s| match s.as_str() {
                "homodyne" => Ok(SchemeChoice::Homodyne),
                "heterodyne" => Ok(SchemeChoice::Heterodyne),
                "double00" => Ok(SchemeChoice::Double00 { xi, chi }),
                "double11" => Ok(SchemeChoice::Double11),
                other => Err(Error::Config(format!(
                    "unknown scheme {other:?}; expected homodyne, heterodyne, double00 or double11"
                ))),
            })
            .collect::<Result<_>>()?;
    } else {
        config.schemes = vec![
            SchemeChoice::Homodyne,
            SchemeChoice::Heterodyne,
            SchemeChoice::Double00 { xi, chi },
            SchemeChoice::Double11,
        ];
    }

    config.detuning.optimize = raw.detuning.optimize.unwrap_or(false);
    if let Some(n) = raw.detuning.grid_steps {
        config.detuning.grid_steps = count("detuning.grid_steps", n)?;
    }
    config.output_path = raw.output.path;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}
