//! Scenario configuration: what to sweep, over which model, and how.
//!
//! The JSON schema mirrors the internal types field by field. Every
//! frequency-valued entry is accepted with either a `_rad_per_s` suffix or
//! an `_omega_m_units` suffix (resolved against the mechanical frequency
//! after overrides); giving both is an error. Temperatures are kelvin,
//! lengths metres, powers watts, masses kilograms.
//!
//! ```json
//! {
//!   "model": { "array": { "n": 2 } },
//!   "physical": { "temperature_k": 0.4, "hopping_omega_m_units": 0.7 },
//!   "sweep": { "axis": "varpi", "start_omega_m_units": 0.0,
//!              "stop_omega_m_units": 1.2, "points": 201, "scale": "linear" },
//!   "pairs": [[0, 1]],
//!   "output": "fig6a.csv",
//!   "seed": 1
//! }
//! ```

use omsim_core::{ModelKind, PhysicalParams};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Sweep axis. `delta` applies to the single-cavity models; `varpi` and
/// `hopping` to arrays; `gamma_m` and `temperature` to any model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Delta,
    GammaM,
    Temperature,
    Varpi,
    Hopping,
}

impl AxisKind {
    pub fn name(&self) -> &'static str {
        match self {
            AxisKind::Delta => "delta",
            AxisKind::GammaM => "gamma_m",
            AxisKind::Temperature => "temperature",
            AxisKind::Varpi => "varpi",
            AxisKind::Hopping => "hopping",
        }
    }

    pub fn is_frequency(&self) -> bool {
        !matches!(self, AxisKind::Temperature)
    }
}

/// Grid spacing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

/// Fully resolved sweep description (canonical units).
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub axis: AxisKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    /// The grid values in ascending order.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                let t = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// A complete, validated scenario.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    pub physical: PhysicalParams,
    pub sweep: SweepSpec,
    /// Mode pairs to measure (0 = mirror, 1.. = cavities).
    pub pairs: Vec<(usize, usize)>,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] omsim_core::CoreError),
}

// ---------------------------------------------------------------------------
// Raw JSON layer
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawModel {
    Original,
    Filter,
    InverseFilter,
    Array { n: usize },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysical {
    cavity_length_m: Option<f64>,
    drive_wavelength_m: Option<f64>,
    drive_power_w: Option<f64>,
    cavity_decay_rad_per_s: Option<f64>,
    cavity_decay_omega_m_units: Option<f64>,
    mech_freq_rad_per_s: Option<f64>,
    mech_mass_kg: Option<f64>,
    temperature_k: Option<f64>,
    mech_damping_rad_per_s: Option<f64>,
    mech_damping_omega_m_units: Option<f64>,
    laser_detuning_rad_per_s: Option<f64>,
    laser_detuning_omega_m_units: Option<f64>,
    cavity_count: Option<usize>,
    hopping_rad_per_s: Option<f64>,
    hopping_omega_m_units: Option<f64>,
    array_detuning_rad_per_s: Option<f64>,
    array_detuning_omega_m_units: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: AxisKind,
    start: Option<f64>,
    start_rad_per_s: Option<f64>,
    start_omega_m_units: Option<f64>,
    stop: Option<f64>,
    stop_rad_per_s: Option<f64>,
    stop_omega_m_units: Option<f64>,
    points: usize,
    scale: Option<Scale>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: RawModel,
    #[serde(default)]
    physical: RawPhysical,
    sweep: RawSweep,
    pairs: Option<Vec<[usize; 2]>>,
    output: Option<String>,
    seed: Option<u64>,
}

fn pick_frequency(
    field: &'static str,
    rad_per_s: Option<f64>,
    omega_m_units: Option<f64>,
    omega_m: f64,
) -> Result<Option<f64>, ConfigError> {
    match (rad_per_s, omega_m_units) {
        (Some(_), Some(_)) => Err(ConfigError::Invalid {
            field,
            reason: "give either the _rad_per_s or the _omega_m_units form, not both".into(),
        }),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(u)) => Ok(Some(u * omega_m)),
        (None, None) => Ok(None),
    }
}

impl ScenarioConfig {
    /// Parse and validate a JSON scenario.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let mut p = PhysicalParams::reference();
        let rp = raw.physical;
        if let Some(v) = rp.cavity_length_m {
            p.cavity_length = v;
        }
        if let Some(v) = rp.drive_wavelength_m {
            p.drive_wavelength = v;
        }
        if let Some(v) = rp.drive_power_w {
            p.drive_power = v;
        }
        if let Some(v) = rp.mech_freq_rad_per_s {
            p.mech_freq = v;
        }
        if let Some(v) = rp.mech_mass_kg {
            p.mech_mass = v;
        }
        if let Some(v) = rp.temperature_k {
            p.temperature = v;
        }
        if let Some(v) = rp.cavity_count {
            p.cavity_count = v;
        }
        // Frequency-valued fields resolve against the (possibly overridden)
        // mechanical frequency.
        let om = p.mech_freq;
        if let Some(v) = pick_frequency(
            "cavity_decay",
            rp.cavity_decay_rad_per_s,
            rp.cavity_decay_omega_m_units,
            om,
        )? {
            p.cavity_decay = v;
        }
        if let Some(v) = pick_frequency(
            "mech_damping",
            rp.mech_damping_rad_per_s,
            rp.mech_damping_omega_m_units,
            om,
        )? {
            p.mech_damping = v;
        }
        if let Some(v) = pick_frequency(
            "laser_detuning",
            rp.laser_detuning_rad_per_s,
            rp.laser_detuning_omega_m_units,
            om,
        )? {
            p.laser_detuning = v;
        }
        if let Some(v) =
            pick_frequency("hopping", rp.hopping_rad_per_s, rp.hopping_omega_m_units, om)?
        {
            p.hopping = v;
        }
        if let Some(v) = pick_frequency(
            "array_detuning",
            rp.array_detuning_rad_per_s,
            rp.array_detuning_omega_m_units,
            om,
        )? {
            p.array_detuning = v;
        }

        let model = match raw.model {
            RawModel::Original => ModelKind::Original,
            RawModel::Filter => ModelKind::Filter,
            RawModel::InverseFilter => ModelKind::InverseFilter,
            RawModel::Array { n } => {
                if n < 1 {
                    return Err(ConfigError::Invalid {
                        field: "model.array.n",
                        reason: "need at least one cavity".into(),
                    });
                }
                p.cavity_count = n;
                ModelKind::Array { n, hopping: p.hopping, varpi: p.array_detuning }
            }
        };

        let rs = raw.sweep;
        let (start, stop) = if rs.axis.is_frequency() {
            let s = pick_frequency("sweep.start", rs.start_rad_per_s, rs.start_omega_m_units, om)?
                .or(rs.start);
            let e = pick_frequency("sweep.stop", rs.stop_rad_per_s, rs.stop_omega_m_units, om)?
                .or(rs.stop);
            (s, e)
        } else {
            if rs.start_rad_per_s.is_some()
                || rs.start_omega_m_units.is_some()
                || rs.stop_rad_per_s.is_some()
                || rs.stop_omega_m_units.is_some()
            {
                return Err(ConfigError::Invalid {
                    field: "sweep",
                    reason: "temperature sweeps take plain `start`/`stop` in kelvin".into(),
                });
            }
            (rs.start, rs.stop)
        };
        let start = start.ok_or(ConfigError::Invalid {
            field: "sweep.start",
            reason: "missing".into(),
        })?;
        let stop = stop.ok_or(ConfigError::Invalid {
            field: "sweep.stop",
            reason: "missing".into(),
        })?;

        let sweep = SweepSpec {
            axis: rs.axis,
            start,
            stop,
            points: rs.points,
            scale: rs.scale.unwrap_or(Scale::Linear),
        };

        let pairs = raw
            .pairs
            .map(|v| v.into_iter().map(|[i, j]| (i, j)).collect::<Vec<_>>())
            .unwrap_or_else(|| vec![(0, 1)]);

        let config = ScenarioConfig {
            model,
            physical: p,
            sweep,
            pairs,
            output: raw.output.map(PathBuf::from),
            seed: raw.seed.unwrap_or(1),
        };
        config.validate()?;
        Ok(config)
    }

    /// Check the cross-field invariants.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.physical.validate()?;
        let s = &self.sweep;
        if s.points < 2 {
            return Err(ConfigError::Invalid {
                field: "sweep.points",
                reason: format!("need at least 2 grid points, got {}", s.points),
            });
        }
        if s.start.is_nan() || s.stop.is_nan() || s.start >= s.stop {
            return Err(ConfigError::Invalid {
                field: "sweep.start",
                reason: format!("start ({}) must be below stop ({})", s.start, s.stop),
            });
        }
        if matches!(s.scale, Scale::Log) && s.start <= 0.0 {
            return Err(ConfigError::Invalid {
                field: "sweep.scale",
                reason: "log scale needs a positive start".into(),
            });
        }
        let is_array = matches!(self.model, ModelKind::Array { .. });
        match s.axis {
            AxisKind::Delta if is_array => {
                return Err(ConfigError::Invalid {
                    field: "sweep.axis",
                    reason: "`delta` applies to the single-cavity models".into(),
                });
            }
            AxisKind::Varpi | AxisKind::Hopping if !is_array => {
                return Err(ConfigError::Invalid {
                    field: "sweep.axis",
                    reason: format!("`{}` applies to array models only", s.axis.name()),
                });
            }
            AxisKind::GammaM | AxisKind::Temperature
                if matches!(s.scale, Scale::Log) && s.start <= 0.0 =>
            {
                return Err(ConfigError::Invalid {
                    field: "sweep.scale",
                    reason: "log scale needs a positive start".into(),
                });
            }
            _ => {}
        }
        let modes = match self.model {
            ModelKind::Array { n, .. } => n + 1,
            _ => 2,
        };
        if self.pairs.is_empty() {
            return Err(ConfigError::Invalid {
                field: "pairs",
                reason: "need at least one mode pair".into(),
            });
        }
        for &(i, j) in &self.pairs {
            if i == j || i >= modes || j >= modes {
                return Err(ConfigError::Invalid {
                    field: "pairs",
                    reason: format!("pair ({i},{j}) invalid for {modes} modes"),
                });
            }
        }
        Ok(())
    }

    /// Canonical single-line JSON of the fully resolved scenario, used in
    /// CSV metadata and report files.
    pub fn resolved_json(&self) -> String {
        let model = match &self.model {
            ModelKind::Original => serde_json::json!("original"),
            ModelKind::Filter => serde_json::json!("filter"),
            ModelKind::InverseFilter => serde_json::json!("inverse_filter"),
            ModelKind::Array { n, hopping, varpi } => {
                serde_json::json!({"array": {"n": n, "hopping_rad_per_s": hopping, "varpi_rad_per_s": varpi}})
            }
        };
        let p = &self.physical;
        serde_json::json!({
            "model": model,
            "physical": {
                "cavity_length_m": p.cavity_length,
                "drive_wavelength_m": p.drive_wavelength,
                "drive_power_w": p.drive_power,
                "cavity_decay_rad_per_s": p.cavity_decay,
                "mech_freq_rad_per_s": p.mech_freq,
                "mech_mass_kg": p.mech_mass,
                "temperature_k": p.temperature,
                "mech_damping_rad_per_s": p.mech_damping,
                "laser_detuning_rad_per_s": p.laser_detuning,
                "cavity_count": p.cavity_count,
                "hopping_rad_per_s": p.hopping,
                "array_detuning_rad_per_s": p.array_detuning,
            },
            "sweep": {
                "axis": self.sweep.axis.name(),
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "points": self.sweep.points,
                "scale": match self.sweep.scale { Scale::Linear => "linear", Scale::Log => "log" },
            },
            "pairs": self.pairs.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>(),
            "seed": self.seed,
        })
        .to_string()
    }
}
