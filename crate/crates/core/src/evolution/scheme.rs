use std::sync::Arc;

use log::warn;
use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{krasny_filter_inplace, Axes, Fft2, Grid, ModelParams, RhsEvaluator, Space};

use super::frame::OriginProbe;
use super::{IntegratorConfig, RunState, Scheme};

const GAMMA: f64 = 0.435_866_521_508_459;

/// Explicit RK4 coefficients below the diagonal.
const A_EXPLICIT: [[f64; 4]; 4] = [[0.0; 4], [0.5, 0.0, 0.0, 0.0], [0.0, 0.5, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
const B: [f64; 4] = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];

/// Diagonally implicit companion sharing the nodes and weights of RK4.
fn a_implicit() -> [[f64; 4]; 4] {
    let g = GAMMA;
    let a43 = 4.0 * g - 24.0 * g * g + 24.0 * g * g * g;
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.5 - g, g, 0.0, 0.0],
        [-g, 0.5, g, 0.0],
        [5.0 * g, 1.0 - 6.0 * g - a43, a43, g],
    ]
}

/// Reusable integrator for one grid, parameter set and configuration.
pub struct Stepper {
    grid: Grid,
    cfg: IntegratorConfig,
    ev: RhsEvaluator,
    /// `|L|` per mode; `L = -i * dispersion`.
    dispersion: Vec<f64>,
    stiff: Vec<bool>,
    /// `dispersion` on stiff modes, 0 elsewhere, and the complement.
    stiff_d: Vec<f64>,
    mild_d: Vec<f64>,
    /// `1 / (1 + i dt gamma d)` on stiff modes, 1 elsewhere.
    solve: Vec<Complex64>,
    a_imp: [[f64; 4]; 4],
    e_half: Vec<Complex64>,
    probe: OriginProbe,
    xi1: Vec<f64>,
    xi2: Vec<f64>,
    stage_e: [Vec<Complex64>; 4],
    stage_s: [Vec<Complex64>; 4],
    y: Vec<Complex64>,
    w: Vec<Complex64>,
    /// Warnings raised during the last step.
    pub(crate) warnings: Vec<String>,
}

impl std::fmt::Debug for Stepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Stepper").field("grid", &self.grid).field("cfg", &self.cfg).finish()
    }
}

fn zeros(n: usize) -> Vec<Complex64> {
    vec![Complex64::default(); n]
}

impl Stepper {
    pub fn new(grid: &Grid, params: &ModelParams, cfg: &IntegratorConfig) -> Result<Self> {
        Self::with_fft(grid, params, cfg, Arc::new(Fft2::new(grid)))
    }

    pub fn with_fft(grid: &Grid, params: &ModelParams, cfg: &IntegratorConfig, fft: Arc<Fft2>) -> Result<Self> {
        grid.validate()?;
        params.validate()?;
        cfg.validate()?;
        let ev = RhsEvaluator::with_fft(grid, params, fft).with_dealiasing(cfg.dealias);
        let dispersion = ev.tables.dispersion.clone();
        let stiff = match cfg.scheme {
            Scheme::CompositeRk => dispersion.iter().map(|d| d * cfg.dt > cfg.stiff_cutoff).collect(),
            Scheme::IfRk4 => vec![false; grid.len()],
        };
        let e_half = match cfg.scheme {
            Scheme::IfRk4 => dispersion.iter().map(|d| Complex64::from_polar(1.0, -d * cfg.dt / 2.0)).collect(),
            Scheme::CompositeRk => Vec::new(),
        };
        let stiff_d: Vec<f64> = dispersion.iter().zip(&stiff).map(|(d, &s)| if s { *d } else { 0.0 }).collect();
        let mild_d: Vec<f64> = dispersion.iter().zip(&stiff).map(|(d, &s)| if s { 0.0 } else { *d }).collect();
        let solve = stiff_d.iter().map(|d| Complex64::new(1.0, cfg.dt * GAMMA * d).inv()).collect();
        let n = grid.len();
        let mut xi1 = Vec::with_capacity(n);
        let mut xi2 = Vec::with_capacity(n);
        for &a in &ev.tables.xi1 {
            for &b in &ev.tables.xi2 {
                xi1.push(a);
                xi2.push(b);
            }
        }
        Ok(Stepper {
            grid: *grid,
            cfg: *cfg,
            dispersion,
            stiff,
            stiff_d,
            mild_d,
            solve,
            a_imp: a_implicit(),
            e_half,
            probe: OriginProbe::new(grid),
            xi1,
            xi2,
            stage_e: [zeros(n), zeros(n), zeros(n), zeros(n)],
            stage_s: [zeros(n), zeros(n), zeros(n), zeros(n)],
            y: zeros(n),
            w: zeros(n),
            ev,
            warnings: Vec::new(),
        })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn evaluator(&mut self) -> &mut RhsEvaluator {
        &mut self.ev
    }

    /// Number of modes handled implicitly by the composite scheme.
    pub fn stiff_count(&self) -> usize {
        self.stiff.iter().filter(|&&s| s).count()
    }

    /// `out = N(y)` plus the frame transport term `i (v . xi) y`; returns `v`.
    ///
    /// With `linear` set, the linear part of the non-stiff modes is added too.
    fn explicit_part(
        &mut self,
        y: &[Complex64],
        out: &mut [Complex64],
        frame: Option<(&mut [f64; 2], Axes)>,
        linear: bool,
    ) -> [f64; 2] {
        self.ev.nonlinear_into(y, out);
        let mut v = [0.0; 2];
        if let Some((prev, axes)) = frame {
            // frame-free right-hand side for the velocity conditions
            for i in 0..y.len() {
                let d = self.dispersion[i];
                self.w[i] = out[i] + Complex64::new(y[i].im * d, -y[i].re * d);
            }
            v = match self.probe.velocity(y, &self.w, axes) {
                Ok(v) => v,
                Err(e) => {
                    self.warnings.push(e.to_string());
                    *prev
                }
            };
            *prev = v;
            if v != [0.0; 2] {
                for i in 0..y.len() {
                    let s = v[0] * self.xi1[i] + v[1] * self.xi2[i];
                    out[i] += Complex64::new(-y[i].im * s, y[i].re * s);
                }
            }
        }
        if linear {
            for ((o, y), d) in out.iter_mut().zip(y).zip(&self.mild_d) {
                *o += Complex64::new(y.im * d, -y.re * d);
            }
        }
        v
    }

    /// Advances `state` by one step in place.
    pub fn advance(&mut self, state: &mut RunState) -> Result<()> {
        state.u_hat.check(&self.grid, Space::Spectral)?;
        self.warnings.clear();
        let mut frame = state.frame;
        let v_avg = match self.cfg.scheme {
            Scheme::CompositeRk => self.composite(&mut state.u_hat.values, frame.as_mut()),
            Scheme::IfRk4 => self.lawson(&mut state.u_hat.values, frame.as_mut()),
        };
        if let Some(f) = frame.as_mut() {
            f.y[0] += self.cfg.dt * v_avg[0];
            f.y[1] += self.cfg.dt * v_avg[1];
        }
        state.frame = frame;
        krasny_filter_inplace(&mut state.u_hat.values, self.cfg.krasny_tau);
        state.t += self.cfg.dt;
        for w in &self.warnings {
            warn!("t = {:.6}: {w}", state.t);
        }
        Ok(())
    }

    /// Additive RK step; returns the `b`-weighted frame velocity.
    ///
    /// The implicit stage values `s` vanish on mild modes, so both tableaux
    /// are applied with plain vector updates.
    fn composite(&mut self, u: &mut [Complex64], mut frame: Option<&mut super::FrameState>) -> [f64; 2] {
        let dt = self.cfg.dt;
        let mut e = std::mem::take(&mut self.stage_e);
        let mut s = std::mem::take(&mut self.stage_s);
        let mut y = std::mem::take(&mut self.y);
        let mut v_avg = [0.0; 2];
        for i in 0..4 {
            y.copy_from_slice(u);
            for j in 0..i {
                let ae = dt * A_EXPLICIT[i][j];
                let ai = dt * self.a_imp[i][j];
                if ae != 0.0 {
                    y.iter_mut().zip(&e[j]).for_each(|(y, e)| *y += e * ae);
                }
                if ai != 0.0 {
                    y.iter_mut().zip(&s[j]).for_each(|(y, s)| *y += s * ai);
                }
            }
            if self.a_imp[i][i] != 0.0 {
                // (1 - dt gamma L)^{-1}, L = -i d
                y.iter_mut().zip(&self.solve).for_each(|(y, f)| *y *= f);
            }
            let fr = frame.as_mut().map(|f| {
                let axes = f.pinned_axis;
                (&mut f.v, axes)
            });
            let v = self.explicit_part(&y, &mut e[i], fr, true);
            v_avg[0] += B[i] * v[0];
            v_avg[1] += B[i] * v[1];
            for ((s, y), d) in s[i].iter_mut().zip(&y).zip(&self.stiff_d) {
                *s = Complex64::new(y.im * d, -y.re * d);
            }
        }
        for (k, u) in u.iter_mut().enumerate() {
            let inc = (e[0][k] + s[0][k]) * B[0] + (e[1][k] + s[1][k]) * B[1] + (e[2][k] + s[2][k]) * B[2] + (e[3][k] + s[3][k]) * B[3];
            *u += inc * dt;
        }
        self.stage_e = e;
        self.stage_s = s;
        self.y = y;
        v_avg
    }

    /// Lawson RK4 in the variable `e^{-L t} u_hat`.
    fn lawson(&mut self, u: &mut [Complex64], mut frame: Option<&mut super::FrameState>) -> [f64; 2] {
        let dt = self.cfg.dt;
        let n = u.len();
        let mut k = std::mem::take(&mut self.stage_e);
        let mut y = std::mem::take(&mut self.y);
        let eh = std::mem::take(&mut self.e_half);
        let mut v_avg = [0.0; 2];
        let mut eval = |this: &mut Self, y: &[Complex64], out: &mut Vec<Complex64>, i: usize, frame: &mut Option<&mut super::FrameState>| {
            let fr = frame.as_mut().map(|f| {
                let axes = f.pinned_axis;
                (&mut f.v, axes)
            });
            let v = this.explicit_part(y, out, fr, false);
            v_avg[0] += B[i] * v[0];
            v_avg[1] += B[i] * v[1];
        };
        // k1 = N(u)
        eval(self, u, &mut k[0], 0, &mut frame);
        // k2 = N(E (u + dt/2 k1))
        for j in 0..n {
            y[j] = eh[j] * (u[j] + k[0][j] * (dt / 2.0));
        }
        eval(self, &y, &mut k[1], 1, &mut frame);
        // k3 = N(E u + dt/2 k2)
        for j in 0..n {
            y[j] = eh[j] * u[j] + k[1][j] * (dt / 2.0);
        }
        eval(self, &y, &mut k[2], 2, &mut frame);
        // k4 = N(E^2 u + dt E k3)
        for j in 0..n {
            y[j] = eh[j] * (eh[j] * u[j] + k[2][j] * dt);
        }
        eval(self, &y, &mut k[3], 3, &mut frame);
        for j in 0..n {
            let e = eh[j];
            let e2 = e * e;
            u[j] = e2 * u[j] + (e2 * k[0][j] + e * (k[1][j] + k[2][j]) * 2.0 + k[3][j]) * (dt / 6.0);
        }
        self.stage_e = k;
        self.y = y;
        self.e_half = eh;
        v_avg
    }
}

/// One step with a freshly built [`Stepper`].
pub fn step(state: &RunState, cfg: &IntegratorConfig, grid: &Grid, params: &ModelParams) -> Result<RunState> {
    let mut st = Stepper::new(grid, params, cfg)?;
    let mut out = state.clone();
    st.advance(&mut out)?;
    Ok(out)
}
