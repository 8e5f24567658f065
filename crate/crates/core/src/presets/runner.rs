use std::path::{Path, PathBuf};

use log::info;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evolution::{evolve, RunRecord};
use crate::io::{read_snapshot, write_atomic, write_snapshot, InitialSpec, RunConfig, SnapshotMeta, StationarySpec};
use crate::spectral::{inverse_transform, Field, Grid, ModelParams, Space};
use crate::stationary::{
    continuation_solve_with, initial_iterate, newton_solve_with, ContinuationSchedule, StationaryProblem, StationaryState,
};

use super::catalog::find_preset;
use super::verdict::{status_label, Verdict};
use super::{gaussian_data, perturbed_state_data};

/// Overrides the stationary-state cache directory.
pub const CACHE_DIR_ENV: &str = "DNLS_CACHE_DIR";

/// Newton solve from the named analytic iterate for the cubic NLS, then
/// continuation to `params`.
pub fn solve_stationary(grid: &Grid, params: &ModelParams, spec: &StationarySpec) -> Result<StationaryState> {
    let opts = spec.newton_options();
    let q0 = initial_iterate(grid, &spec.initial)?;
    let seed = newton_solve_with(&q0, &StationaryProblem::new(*grid, ModelParams::nls())?, &opts)?;
    let schedule = ContinuationSchedule {
        max_halvings: spec.max_halvings,
        ..ContinuationSchedule::from_ground_state(params).with_step(spec.max_step)
    };
    continuation_solve_with(&schedule, &seed, &opts)
}

/// Stationary states on disk, one snapshot per (grid, parameters, solver
/// settings). Files are written by rename, so concurrent runs are safe.
#[derive(Debug, Clone)]
pub struct StateCache {
    dir: Option<PathBuf>,
}

#[derive(Serialize)]
struct CacheKey<'a> {
    grid: &'a Grid,
    params: &'a ModelParams,
    stationary: &'a StationarySpec,
}

impl StateCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        StateCache { dir: Some(dir.into()) }
    }

    /// `$DNLS_CACHE_DIR`, or `.dnls-cache` in the working directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_DIR_ENV).map_or_else(|| PathBuf::from(".dnls-cache"), PathBuf::from))
    }

    /// Solves every time.
    pub fn disabled() -> Self {
        StateCache { dir: None }
    }

    pub fn key(grid: &Grid, params: &ModelParams, spec: &StationarySpec) -> String {
        let json = serde_json::to_vec(&CacheKey { grid, params, stationary: spec }).expect("key serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn path(&self, grid: &Grid, params: &ModelParams, spec: &StationarySpec) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.snap", Self::key(grid, params, spec))))
    }

    /// Physical `Q` for the given problem, from disk when available.
    pub fn stationary(&self, grid: &Grid, params: &ModelParams, spec: &StationarySpec) -> Result<Field> {
        let path = self.path(grid, params, spec);
        if let Some(p) = path.as_deref().filter(|p| p.exists()) {
            match read_snapshot(p) {
                Ok((q, meta)) if meta.grid == *grid && q.space == Space::Physical => {
                    info!("stationary state from cache {}", p.display());
                    return Ok(q);
                }
                Ok(_) => info!("ignoring mismatched cache entry {}", p.display()),
                Err(e) => info!("ignoring unreadable cache entry {}: {e}", p.display()),
            }
        }
        let state = solve_stationary(grid, params, spec)?;
        info!("stationary state: residual {:.2e} after {} iterations", state.residual_norm, state.iterations);
        if let Some(p) = path {
            write_snapshot(&state.q, &SnapshotMeta { grid: *grid, t: 0.0 }, &p)?;
        }
        Ok(state.q)
    }
}

fn load_on_grid(path: &Path, grid: &Grid) -> Result<Field> {
    let (f, meta) = read_snapshot(path)?;
    if meta.grid.shape() != grid.shape() || meta.grid.l1 != grid.l1 || meta.grid.l2 != grid.l2 {
        return Err(Error::invalid(
            "initial",
            format!("{} holds a {:?} grid, the run uses {:?}", path.display(), meta.grid, grid),
        ));
    }
    match f.space {
        Space::Physical => Ok(f),
        Space::Spectral => inverse_transform(&f, grid),
    }
}

/// Physical initial data of a run.
pub fn initial_data(cfg: &RunConfig, cache: &StateCache) -> Result<Field> {
    let state = |path: &Option<PathBuf>| match path {
        Some(p) => load_on_grid(p, &cfg.grid),
        None => cache.stationary(&cfg.grid, &cfg.model, &cfg.stationary),
    };
    match &cfg.initial {
        InitialSpec::Gaussian { amplitude } => Ok(gaussian_data(&cfg.grid, *amplitude)),
        InitialSpec::Perturbed { sign, amplitude, state: path } => {
            perturbed_state_data(&state(path)?, &cfg.grid, *sign, *amplitude)
        }
        InitialSpec::Stationary { state: path } => state(path),
        InitialSpec::File { path } => load_on_grid(path, &cfg.grid),
    }
}

/// Builds the initial data and evolves it.
pub fn run_config(cfg: &RunConfig, cache: &StateCache) -> Result<RunRecord> {
    cfg.validate()?;
    let u0 = initial_data(cfg, cache)?;
    evolve(&u0, &cfg.integrator, &cfg.grid, &cfg.model, &cfg.output.monitors(), cfg.frame.axes())
}

#[derive(Debug, Clone)]
pub struct PresetOutcome {
    pub name: String,
    pub reduced: bool,
    pub config: RunConfig,
    pub record: RunRecord,
    pub verdict: Verdict,
}

/// Machine-readable digest of a preset run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetSummary {
    pub name: String,
    pub reduced: bool,
    pub reference: String,
    pub status: String,
    pub stop_time: Option<f64>,
    pub final_time: f64,
    pub max_mass_drift: f64,
    pub initial_linf: f64,
    pub final_linf: f64,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

impl PresetOutcome {
    pub fn summary(&self) -> PresetSummary {
        let rec = &self.record;
        PresetSummary {
            name: self.name.clone(),
            reduced: self.reduced,
            reference: find_preset(&self.name).map(|p| p.reference.to_string()).unwrap_or_default(),
            status: status_label(&rec.status).to_string(),
            stop_time: rec.status.stop_time(),
            final_time: rec.samples.last().map_or(0.0, |s| s.t),
            max_mass_drift: rec.max_mass_drift(),
            initial_linf: rec.samples.first().map_or(0.0, |s| s.linf),
            final_linf: rec.samples.last().map_or(0.0, |s| s.linf),
            warnings: rec.warnings.clone(),
            verdict: self.verdict.clone(),
        }
    }

    pub fn write_summary(&self, path: impl AsRef<Path>) -> Result<()> {
        let json = serde_json::to_vec_pretty(&self.summary()).map_err(|e| Error::invalid("summary", e.to_string()))?;
        write_atomic(path.as_ref(), &json)
    }
}

/// Runs a catalog entry (chaining the stationary solve when needed) and
/// checks the record against the entry's expectations.
pub fn run_preset(name: &str, reduced: bool, cache: &StateCache) -> Result<PresetOutcome> {
    let preset = find_preset(name)?;
    let config = preset.config(reduced)?;
    info!("preset {name}{}: {}", if reduced { " (reduced)" } else { "" }, preset.reference);
    let record = run_config(&config, cache)?;
    let verdict = Verdict::evaluate(&preset.expectations, &record, reduced);
    Ok(PresetOutcome { name: name.to_string(), reduced, config, record, verdict })
}
