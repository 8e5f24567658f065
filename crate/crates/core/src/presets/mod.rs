//! Named experiments: a catalog of runs with their expected outcomes, the
//! initial-data constructors they share, and a runner that chains the
//! stationary solve (cached on disk) into the evolution.

mod catalog;
mod runner;
mod verdict;

use crate::error::Result;
use crate::io::Sign;
use crate::spectral::{Field, Grid, Space};

pub use catalog::{catalog, find_preset, preset_config, preset_names, Preset};
pub use runner::{
    initial_data, run_config, run_preset, solve_stationary, PresetOutcome, PresetSummary, StateCache, CACHE_DIR_ENV,
};
pub use verdict::{
    count_humps, dispersed, focus_then_decay, local_maxima, monotone_decreasing, oscillatory, status_label, Check,
    Expectation, Verdict, DISPERSED_FRACTION, FOCUS_MARGIN, HUMP_FRACTION, MIN_OSCILLATIONS, MONOTONE_SLACK,
    OSCILLATION_BAND,
};

/// `Q + sign * amplitude * exp(-|x|^2)` on the grid of `q` (physical).
pub fn perturbed_state_data(q: &Field, grid: &Grid, sign: Sign, amplitude: f64) -> Result<Field> {
    q.check(grid, Space::Physical)?;
    let a = sign.value() * amplitude;
    let bump = grid.sample(|x1, x2| a * (-(x1 * x1 + x2 * x2)).exp());
    let mut u = q.clone();
    for (z, b) in u.values.iter_mut().zip(bump) {
        z.re += b;
    }
    Ok(u)
}

/// `amplitude * exp(-|x|^2)`.
pub fn gaussian_data(grid: &Grid, amplitude: f64) -> Field {
    Field::from_real_fn(grid, |x1, x2| amplitude * (-(x1 * x1 + x2 * x2)).exp())
}
