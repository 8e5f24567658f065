//! Run configuration files (TOML).
//!
//! ```toml
//! preset = "nls_plus"        # optional: start from a catalog entry
//! reduced = false            # halved resolution variant of the preset
//!
//! [grid]
//! l1 = 3.0
//! l2 = 3.0
//! n1 = 512
//! n2 = 512
//!
//! [model]
//! sigma = 1.0
//! epsilon = 0.0
//! axes = []                  # subset of ["x1", "x2"]
//! delta = [0.0, 0.0]
//!
//! [integrator]
//! dt = 1e-3
//! t_end = 5.0
//! scheme = "composite_rk"    # or "if_rk4"
//!
//! [initial]
//! kind = "perturbed"         # gaussian | perturbed | stationary | file
//! sign = "plus"
//! amplitude = 0.1
//!
//! [frame]
//! axes = ["x2"]
//!
//! [output]
//! dir = "out"
//! snapshot_times = [1.0]
//!
//! [stationary]
//! tol = 1e-10
//! ```
//!
//! Keys given in the file override the preset; everything else takes its
//! default, and each default is logged at `info` level.

use std::path::PathBuf;

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{IntegratorConfig, Monitors};
use crate::spectral::{Axes, Grid, ModelParams};
use crate::stationary::NewtonOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn gaussian_amplitude() -> f64 {
    4.0
}

fn perturbation_amplitude() -> f64 {
    0.1
}

/// Initial data of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialSpec {
    /// `amplitude * exp(-|x|^2)`.
    Gaussian {
        #[serde(default = "gaussian_amplitude")]
        amplitude: f64,
    },
    /// `Q + sign * amplitude * exp(-|x|^2)`, with `Q` read from `state` or
    /// solved for the run's grid and parameters.
    Perturbed {
        sign: Sign,
        #[serde(default = "perturbation_amplitude")]
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<PathBuf>,
    },
    /// The stationary state itself.
    Stationary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<PathBuf>,
    },
    /// A snapshot file on the run grid.
    File { path: PathBuf },
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec::Gaussian { amplitude: gaussian_amplitude() }
    }
}

impl InitialSpec {
    pub fn needs_stationary_state(&self) -> bool {
        matches!(self, InitialSpec::Perturbed { state: None, .. } | InitialSpec::Stationary { state: None })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSpec {
    /// Velocity components that may be nonzero; empty means a fixed frame.
    pub axes: Axes,
}

impl FrameSpec {
    pub fn axes(&self) -> Option<Axes> {
        (!self.axes.is_empty()).then_some(self.axes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// File names inside `dir`.
    pub series: String,
    pub state: String,
    pub snapshot_prefix: String,
    pub snapshot_times: Vec<f64>,
    pub sample_every: usize,
    pub mass_drift_stop: f64,
    pub resolution_warn: f64,
}

impl Default for OutputSpec {
    fn default() -> Self {
        let m = Monitors::default();
        OutputSpec {
            dir: PathBuf::from("out"),
            series: "series.csv".into(),
            state: "state.snap".into(),
            snapshot_prefix: "snapshot".into(),
            snapshot_times: Vec::new(),
            sample_every: m.sample_every,
            mass_drift_stop: m.mass_drift_stop,
            resolution_warn: m.resolution_warn,
        }
    }
}

impl OutputSpec {
    pub fn monitors(&self) -> Monitors {
        Monitors {
            mass_drift_stop: self.mass_drift_stop,
            resolution_warn: self.resolution_warn,
            sample_every: self.sample_every,
            snapshot_times: self.snapshot_times.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationarySpec {
    pub tol: f64,
    pub maxiter: usize,
    /// `sech2` or `gaussian`.
    pub initial: String,
    pub max_step: f64,
    pub max_halvings: usize,
}

impl Default for StationarySpec {
    fn default() -> Self {
        let n = NewtonOptions::default();
        StationarySpec { tol: n.tol, maxiter: n.maxiter, initial: "sech2".into(), max_step: 0.2, max_halvings: 4 }
    }
}

impl StationarySpec {
    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions { tol: self.tol, maxiter: self.maxiter, ..NewtonOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub reduced: bool,
    pub grid: Grid,
    pub model: ModelParams,
    pub integrator: IntegratorConfig,
    pub initial: InitialSpec,
    pub frame: FrameSpec,
    pub output: OutputSpec,
    pub stationary: StationarySpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            reduced: false,
            grid: Grid::default(),
            model: ModelParams::nls(),
            integrator: IntegratorConfig::default(),
            initial: InitialSpec::default(),
            frame: FrameSpec::default(),
            output: OutputSpec::default(),
            stationary: StationarySpec::default(),
        }
    }
}

fn finite(field: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {x}")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.model.validate()?;
        self.integrator.validate()?;
        self.output.monitors().validate()?;
        match &self.initial {
            InitialSpec::Gaussian { amplitude } | InitialSpec::Perturbed { amplitude, .. } => {
                finite("amplitude", *amplitude)?
            }
            _ => {}
        }
        let s = &self.stationary;
        if !(s.tol > 0.0 && s.tol.is_finite()) {
            return Err(Error::invalid("tol", "must be positive and finite"));
        }
        if !(s.max_step > 0.0 && s.max_step.is_finite()) {
            return Err(Error::invalid("max_step", "must be positive and finite"));
        }
        if s.maxiter == 0 {
            return Err(Error::invalid("maxiter", "must be at least 1"));
        }
        crate::stationary::initial_iterate(&Grid { l1: 1.0, l2: 1.0, n1: 2, n2: 2 }, &s.initial)
            .map_err(|_| Error::invalid("initial", format!("unknown initial iterate `{}`", s.initial)))?;
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::invalid("config", e.to_string()))
    }
}

fn parse_error(text: &str, e: &toml::de::Error) -> Error {
    let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    Error::Parse { line, message: e.message().to_string() }
}

/// Recursively overlays `top` onto `base`.
fn merge(base: &mut toml::Table, top: toml::Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) if k != "initial" => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Dotted paths of leaves in `full` that are missing from `given`.
fn defaulted(full: &toml::Table, given: &toml::Table, prefix: &str, out: &mut Vec<String>) {
    for (k, v) in full {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match (v, given.get(k)) {
            (toml::Value::Table(f), Some(toml::Value::Table(g))) => defaulted(f, g, &path, out),
            (toml::Value::Table(f), None) => defaulted(f, &toml::Table::new(), &path, out),
            (v, None) => out.push(format!("{path} = {v}")),
            _ => {}
        }
    }
}

/// Parses and validates a configuration; also returns `key = value` for
/// every default that was filled in.
pub fn parse_config_verbose(text: &str) -> Result<(RunConfig, Vec<String>)> {
    // typed parse first, for line-numbered errors
    let direct: RunConfig = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    let user: toml::Table = text.parse().map_err(|e| parse_error(text, &e))?;
    let (cfg, given) = match &direct.preset {
        Some(name) => {
            let canonical = crate::presets::preset_config(name, direct.reduced)?;
            let mut table = toml::Table::try_from(&canonical).map_err(|e| Error::invalid("preset", e.to_string()))?;
            merge(&mut table, user);
            let cfg: RunConfig = table.clone().try_into().map_err(|e: toml::de::Error| Error::Parse {
                line: 0,
                message: e.message().to_string(),
            })?;
            (cfg, table)
        }
        None => (direct, user),
    };
    cfg.validate()?;
    let full = toml::Table::try_from(&cfg).map_err(|e| Error::invalid("config", e.to_string()))?;
    let mut defaults = Vec::new();
    defaulted(&full, &given, "", &mut defaults);
    for d in &defaults {
        info!("config default: {d}");
    }
    Ok((cfg, defaults))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_verbose(text).map(|(c, _)| c)
}

pub fn read_config(path: impl AsRef<std::path::Path>) -> Result<RunConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
