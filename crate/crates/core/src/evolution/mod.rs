//! Time integration of the evolution equation in Fourier space,
//!
//! ```text
//! u_hat_t = L u_hat + N(u_hat),  L = -i |xi|^2 / P_eps,
//! N(u_hat) = i (1 - delta . xi) / P_eps * DFT(|u|^{2 sigma} u),
//! ```
//!
//! with conservation and resolution monitoring and an optional frame that
//! keeps the density maximum at the origin.

mod frame;
mod run;
mod scheme;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Axes, Field};

pub use frame::moving_frame_velocity;
pub use run::{
    conserved_functional, evolve, loglog_slope, observed_order, Monitors, RunRecord, RunStatus, Sample, Snapshot,
};
pub use scheme::{step, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Explicit RK4 for the nonlinear term and the mild modes, a diagonally
    /// implicit companion for the stiff linear modes.
    #[default]
    CompositeRk,
    /// Integrating-factor (Lawson) RK4 with the exact linear propagator.
    IfRk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Modes with `|L(xi)| dt` above this are treated implicitly by the composite scheme.
    pub stiff_cutoff: f64,
    /// Krasny filter threshold applied after every step; 0 disables it.
    pub krasny_tau: f64,
    /// 2/3-rule truncation of the nonlinear term.
    pub dealias: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: 1e-3, t_end: 1.0, scheme: Scheme::CompositeRk, stiff_cutoff: 1.0, krasny_tau: 0.0, dealias: false }
    }
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        IntegratorConfig { dt, t_end, ..Self::default() }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_krasny(mut self, tau: f64) -> Self {
        self.krasny_tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::invalid("t_end", format!("must be finite and >= 0, got {}", self.t_end)));
        }
        if !(self.stiff_cutoff.is_finite() && self.stiff_cutoff >= 0.0) {
            return Err(Error::invalid("stiff_cutoff", "must be finite and >= 0"));
        }
        if !(self.krasny_tau.is_finite() && self.krasny_tau >= 0.0) {
            return Err(Error::invalid("krasny_tau", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Number of steps, `round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Moving reference frame `x -> x - y(t)`, `v = y'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameState {
    pub y: [f64; 2],
    pub v: [f64; 2],
    /// Components of `v` that may be nonzero; the others stay 0.
    pub pinned_axis: Axes,
}

impl FrameState {
    pub fn new(pinned_axis: Axes) -> Self {
        FrameState { y: [0.0; 2], v: [0.0; 2], pinned_axis }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunState {
    pub t: f64,
    pub u_hat: Field,
    pub frame: Option<FrameState>,
}

impl RunState {
    pub fn new(u_hat: Field) -> Self {
        RunState { t: 0.0, u_hat, frame: None }
    }

    pub fn with_frame(mut self, pinned_axis: Axes) -> Self {
        self.frame = Some(FrameState::new(pinned_axis));
        self
    }

    /// Coefficients in the lab frame, `u_hat e^{-i xi . y}`.
    pub fn lab_frame(&self, grid: &crate::spectral::Grid) -> Field {
        let mut out = self.u_hat.clone();
        if let Some(f) = &self.frame {
            let xi1 = grid.wavenumbers(crate::spectral::Axis::X1);
            let xi2 = grid.wavenumbers(crate::spectral::Axis::X2);
            for (k1, &a) in xi1.iter().enumerate() {
                for (k2, &b) in xi2.iter().enumerate() {
                    let ph = -(a * f.y[0] + b * f.y[1]);
                    out.values[k1 * grid.n2 + k2] *= num_complex::Complex64::from_polar(1.0, ph);
                }
            }
        }
        out
    }
}
