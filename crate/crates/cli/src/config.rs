//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. A `preset = NAME` line
//! loads that preset first and the remaining keys override it. Lists are
//! comma separated. `run.conf` in this crate documents every key.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use brl_core::dynamics::SourceLaw;
use brl_core::lattice::{Deposition, LatticeConfig};
use brl_core::reflection::{default_rejection_lattice, Incident};
use brl_core::{Drive, InitialState, ModelParams, WaveInitialData};

use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Trajectory,
    Snapshots,
    Roots,
    Reflection,
}

impl Output {
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "trajectory" => Ok(Output::Trajectory),
            "snapshots" => Ok(Output::Snapshots),
            "roots" => Ok(Output::Roots),
            "reflection" => Ok(Output::Reflection),
            other => Err(format!(
                "unknown output `{other}` (expected trajectory, snapshots, roots, reflection)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Zero,
    /// `u(0, x) = amplitude exp(-((x - center) / width)^2)`, at rest.
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Right-to-left wave `u+(t + x/c)` with `u+(s) = amplitude sin(frequency (s - x0/c))`.
    Incident {
        amplitude: f64,
        frequency: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub dx: f64,
    pub cfl: f64,
    pub deposition: Deposition,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: SourceLaw,
    pub params: ModelParams,
    pub q0: f64,
    pub v0: f64,
    pub field: FieldSpec,
    pub drive: Drive,
    pub lattice: Option<LatticeSpec>,
    pub horizon: f64,
    pub dt: f64,
    pub snapshots: Vec<f64>,
    pub snapshot_points: usize,
    pub outputs: Vec<Output>,
}

const KEYS: &[&str] = &[
    "preset",
    "model",
    "omega",
    "gamma",
    "gamma0",
    "gamma1",
    "gamma2",
    "gamma3",
    "alpha0",
    "alpha1",
    "c",
    "x0",
    "q0",
    "v0",
    "field",
    "field_amplitude",
    "field_center",
    "field_width",
    "field_frequency",
    "drive",
    "drive_amplitude",
    "drive_omega",
    "drive_phase",
    "drive_center",
    "drive_width",
    "lattice",
    "lattice_dx",
    "lattice_cfl",
    "deposition",
    "horizon",
    "dt",
    "snapshots",
    "snapshot_points",
    "outputs",
];

const NON_NUMERIC: &[&str] = &[
    "preset",
    "model",
    "field",
    "drive",
    "lattice",
    "deposition",
    "snapshots",
    "outputs",
];

/// Keys that take a single number, i.e. the ones a sweep can vary.
pub fn is_numeric_key(key: &str) -> bool {
    KEYS.contains(&key) && !NON_NUMERIC.contains(&key)
}

/// Raw key-value pairs in file order, later keys winning.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`, found `{line}`", i + 1))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(format!("line {}: unknown key `{key}`", i + 1));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Resolves the `preset` key (if any) and overlays `pairs` on top of it.
pub fn resolve(pairs: BTreeMap<String, String>) -> Result<BTreeMap<String, String>, String> {
    let Some(name) = pairs.get("preset") else {
        return Ok(pairs);
    };
    let text = presets::lookup(name).ok_or_else(|| {
        format!(
            "unknown preset `{name}` (available: {})",
            presets::names().join(", ")
        )
    })?;
    let mut merged = parse_pairs(text)?;
    for (k, v) in pairs {
        if k != "preset" {
            merged.insert(k, v);
        }
    }
    Ok(merged)
}

fn number(map: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64, String> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse::<f64>()
            .map_err(|_| format!("`{key}` expects a number, found `{v}`")),
    }
}

fn numbers(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<f64>, String> {
    match map.get(key) {
        None => Ok(Vec::new()),
        Some(v) if v.trim().is_empty() => Ok(Vec::new()),
        Some(v) => v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{key}` expects numbers, found `{s}`"))
            })
            .collect(),
    }
}

impl RunConfig {
    #[cfg(test)]
    pub fn from_text(text: &str) -> Result<Self, String> {
        Self::from_map(resolve(parse_pairs(text)?)?)
    }

    pub fn from_map(map: BTreeMap<String, String>) -> Result<Self, String> {
        let model = map.get("model").map_or(Ok(SourceLaw::B), |m| m.parse())?;
        let mut params = ModelParams::default();
        for (name, _) in ModelParams::default().fields() {
            let value = number(&map, name, params.get(name).unwrap_or(0.0))?;
            params.set(name, value);
        }
        let params = params.validate().map_err(|e| e.to_string())?;

        let field = match map.get("field").map(String::as_str).unwrap_or("zero") {
            "zero" => FieldSpec::Zero,
            "gaussian" => FieldSpec::Gaussian {
                amplitude: number(&map, "field_amplitude", 1.0)?,
                center: number(&map, "field_center", params.x0 + 3.0)?,
                width: number(&map, "field_width", 1.0)?,
            },
            "incident" => FieldSpec::Incident {
                amplitude: number(&map, "field_amplitude", 1.0)?,
                frequency: number(&map, "field_frequency", params.omega)?,
            },
            other => {
                return Err(format!(
                    "unknown field `{other}` (expected zero, gaussian, incident)"
                ))
            }
        };

        let drive = match map.get("drive").map(String::as_str).unwrap_or("zero") {
            "zero" => Drive::Zero,
            "sinusoid" => Drive::Sinusoid {
                amplitude: number(&map, "drive_amplitude", 1.0)?,
                omega: number(&map, "drive_omega", params.omega)?,
                phase: number(&map, "drive_phase", 0.0)?,
            },
            "gaussian" => Drive::GaussianPulse {
                amplitude: number(&map, "drive_amplitude", 1.0)?,
                center: number(&map, "drive_center", 5.0)?,
                width: number(&map, "drive_width", 1.0)?,
            },
            other => {
                return Err(format!(
                    "unknown drive `{other}` (expected zero, sinusoid, gaussian)"
                ))
            }
        };

        let lattice = match map.get("lattice").map(String::as_str).unwrap_or("off") {
            "off" | "false" | "no" => None,
            "on" | "true" | "yes" => Some(LatticeSpec {
                dx: number(&map, "lattice_dx", 0.02)?,
                cfl: number(&map, "lattice_cfl", 1.0)?,
                deposition: match map.get("deposition").map(String::as_str).unwrap_or("hat") {
                    "hat" => Deposition::Hat,
                    "nearest" => Deposition::NearestNode,
                    other => {
                        return Err(format!(
                            "unknown deposition `{other}` (expected hat, nearest)"
                        ))
                    }
                },
            }),
            other => return Err(format!("`lattice` expects on or off, found `{other}`")),
        };

        let outputs = match map.get("outputs") {
            None => vec![Output::Trajectory],
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Output::parse)
                .collect::<Result<Vec<_>, _>>()?,
        };
        if outputs.is_empty() {
            return Err("`outputs` must name at least one artifact".into());
        }

        let snapshot_points = number(&map, "snapshot_points", 401.0)?;
        if !(snapshot_points >= 2.0) || snapshot_points.fract() != 0.0 {
            return Err(format!(
                "`snapshot_points` must be an integer >= 2, found {snapshot_points}"
            ));
        }

        let horizon = number(&map, "horizon", 20.0)?;
        let dt = number(&map, "dt", 1e-3)?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(format!("`dt` must be positive, found {dt}"));
        }
        if !(horizon >= dt) || !horizon.is_finite() {
            return Err(format!(
                "`horizon` must be at least dt = {dt}, found {horizon}"
            ));
        }

        Ok(Self {
            model,
            params,
            q0: number(&map, "q0", 1.0)?,
            v0: number(&map, "v0", 0.0)?,
            field,
            drive,
            lattice,
            horizon,
            dt,
            snapshots: numbers(&map, "snapshots")?,
            snapshot_points: snapshot_points as usize,
            outputs,
        })
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    pub fn incident(&self) -> Incident {
        match self.field {
            FieldSpec::Incident {
                amplitude,
                frequency,
            } => Incident::sinusoid(amplitude, frequency, self.params.x0 / self.params.c, 0.0),
            _ => Incident::zero(),
        }
    }

    pub fn field_data(&self) -> WaveInitialData {
        match self.field {
            FieldSpec::Zero => WaveInitialData::zero(),
            FieldSpec::Gaussian {
                amplitude,
                center,
                width,
            } => WaveInitialData::zero().with_displacement(move |x: f64| {
                amplitude * (-((x - center) / width).powi(2)).exp()
            }),
            FieldSpec::Incident { .. } => self.incident().initial_data(self.params.c),
        }
    }

    pub fn initial_state(&self) -> InitialState {
        InitialState::quiescent(self.q0, self.v0).with_field(self.field_data())
    }

    pub fn lattice_config(&self) -> Option<LatticeConfig> {
        self.lattice.as_ref().map(|spec| {
            let mut cfg = LatticeConfig::for_horizon(&self.params, self.horizon, spec.dx, spec.cfl);
            cfg.deposition = spec.deposition;
            cfg
        })
    }

    /// Lattice for reflection runs: the configured one, else about 60 cells
    /// per incident wavelength.
    pub fn reflection_lattice(&self) -> LatticeConfig {
        self.lattice_config().unwrap_or_else(|| {
            let frequency = match self.field {
                FieldSpec::Incident { frequency, .. } => frequency.max(self.params.omega),
                _ => self.params.omega,
            };
            if frequency > self.params.omega {
                let dx = 2.0 * PI * self.params.c / (frequency * 60.0);
                LatticeConfig::for_horizon(&self.params, self.horizon, dx, 1.0)
            } else {
                default_rejection_lattice(&self.params, self.horizon)
            }
        })
    }
}
