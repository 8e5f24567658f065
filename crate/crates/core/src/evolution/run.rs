use std::sync::Arc;

use log::{info, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{resolution_indicator_raw, spectral_weight, Axes, Fft2, Field, Grid, ModelParams, Space, Tables};

use super::{IntegratorConfig, RunState, Stepper};

/// `M_eps = ||P_eps^{1/2} u||^2`, by Plancherel on the coefficients.
pub fn conserved_functional(u_hat: &Field, grid: &Grid, params: &ModelParams) -> Result<f64> {
    u_hat.check(grid, Space::Spectral)?;
    let tables = Tables::new(grid, params);
    Ok(weighted_mass(&u_hat.values, &tables.p, spectral_weight(grid)))
}

fn weighted_mass(values: &[Complex64], p: &[f64], weight: f64) -> f64 {
    values.iter().zip(p).map(|(z, p)| p * z.norm_sqr()).sum::<f64>() * weight
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monitors {
    /// Stop once the relative drift of `M_eps` exceeds this.
    pub mass_drift_stop: f64,
    /// Record a warning once the resolution indicator exceeds this.
    pub resolution_warn: f64,
    /// Record a sample every this many steps.
    pub sample_every: usize,
    /// Times at which physical snapshots are stored (nearest step).
    pub snapshot_times: Vec<f64>,
}

impl Default for Monitors {
    fn default() -> Self {
        Monitors { mass_drift_stop: 1e-3, resolution_warn: 1e-4, sample_every: 1, snapshot_times: Vec::new() }
    }
}

impl Monitors {
    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass_drift_stop > 0.0) {
            return Err(Error::invalid("mass_drift_stop", "must be positive"));
        }
        if !(self.resolution_warn > 0.0) {
            return Err(Error::invalid("resolution_warn", "must be positive"));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every", "must be at least 1"));
        }
        if self.snapshot_times.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("snapshot_times", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub linf: f64,
    pub mass_rel_drift: f64,
    pub resolution: f64,
    pub v: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// Physical values in the computational (possibly moving) frame.
    pub field: Field,
    /// Frame shift `y` at the snapshot time.
    pub shift: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "t", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Completed, but the resolution indicator crossed its threshold at this time.
    ResolutionWarn(f64),
    MassDriftStop(f64),
    OverflowStop(f64),
}

impl RunStatus {
    pub fn reached_end(&self) -> bool {
        matches!(self, RunStatus::Completed | RunStatus::ResolutionWarn(_))
    }

    pub fn is_blow_up(&self) -> bool {
        matches!(self, RunStatus::MassDriftStop(_) | RunStatus::OverflowStop(_))
    }

    pub fn stop_time(&self) -> Option<f64> {
        match self {
            RunStatus::MassDriftStop(t) | RunStatus::OverflowStop(t) => Some(*t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<Snapshot>,
    pub status: RunStatus,
    pub warnings: Vec<String>,
    pub final_state: RunState,
}

impl RunRecord {
    pub fn max_mass_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.mass_rel_drift).fold(0.0, f64::max)
    }

    pub fn linf(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.linf).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Snapshot closest to `t`.
    pub fn snapshot_near(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }
}

struct Probe {
    fft: Arc<Fft2>,
    p: Vec<f64>,
    weight: f64,
    phys: Vec<Complex64>,
}

impl Probe {
    fn physical(&mut self, u_hat: &[Complex64]) -> &[Complex64] {
        self.phys.copy_from_slice(u_hat);
        self.fft.inverse_inplace(&mut self.phys);
        &self.phys
    }
}

/// Runs the evolution from physical data `u0`, optionally in a moving frame
/// whose velocity may point along `frame`.
pub fn evolve(
    u0: &Field,
    cfg: &IntegratorConfig,
    grid: &Grid,
    params: &ModelParams,
    monitors: &Monitors,
    frame: Option<Axes>,
) -> Result<RunRecord> {
    u0.check(grid, Space::Physical)?;
    monitors.validate()?;
    let fft = Arc::new(Fft2::new(grid));
    let mut stepper = Stepper::with_fft(grid, params, cfg, fft.clone())?;
    let tables = Tables::new(grid, params);
    let mut probe = Probe { fft: fft.clone(), p: tables.p, weight: spectral_weight(grid), phys: vec![Complex64::default(); grid.len()] };

    let mut u_hat = u0.clone();
    fft.forward_inplace(&mut u_hat.values);
    u_hat.space = Space::Spectral;
    let mut state = RunState { t: 0.0, u_hat, frame: frame.map(super::FrameState::new) };

    let m0 = weighted_mass(&state.u_hat.values, &probe.p, probe.weight);
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let mut warnings = Vec::new();
    let mut resolution_warned: Option<f64> = None;
    let mut pending: Vec<f64> = monitors.snapshot_times.clone();
    pending.sort_by(f64::total_cmp);
    pending.reverse();

    let steps = cfg.steps();
    let mut status = RunStatus::Completed;
    let mut n = 0usize;
    loop {
        let t = n as f64 * cfg.dt;
        state.t = t;
        let sampling = n % monitors.sample_every == 0 || n == steps;
        let snap_due = pending.last().is_some_and(|&ts| ts <= t + cfg.dt / 2.0);
        if sampling || snap_due {
            let mass = weighted_mass(&state.u_hat.values, &probe.p, probe.weight);
            let drift = if m0 > 0.0 { (mass - m0).abs() / m0 } else { (mass - m0).abs() };
            let resolution = resolution_indicator_raw(&state.u_hat.values, grid.n1, grid.n2);
            let phys = probe.physical(&state.u_hat.values);
            let linf = phys.iter().map(|z| z.norm()).fold(0.0, f64::max);
            while pending.last().is_some_and(|&ts| ts <= t + cfg.dt / 2.0) {
                pending.pop();
                snapshots.push(Snapshot {
                    t,
                    field: Field { values: phys.to_vec(), n1: grid.n1, n2: grid.n2, space: Space::Physical },
                    shift: state.frame.map_or([0.0; 2], |f| f.y),
                });
            }
            if sampling {
                let v = state.frame.map_or([0.0; 2], |f| f.v);
                samples.push(Sample { t, linf, mass_rel_drift: drift, resolution, v });
                if resolution > monitors.resolution_warn && resolution_warned.is_none() {
                    resolution_warned = Some(t);
                    let msg = format!("resolution indicator {resolution:.3e} above {:.1e} at t = {t:.6}", monitors.resolution_warn);
                    warn!("{msg}");
                    warnings.push(msg);
                }
                if drift > monitors.mass_drift_stop || !drift.is_finite() {
                    info!("mass drift {drift:.3e} at t = {t:.6}, stopping");
                    status = if drift.is_finite() { RunStatus::MassDriftStop(t) } else { RunStatus::OverflowStop(t) };
                    break;
                }
            }
        }
        if n == steps {
            break;
        }
        stepper.advance(&mut state)?;
        warnings.extend(stepper.warnings.drain(..));
        n += 1;
        if !state.u_hat.is_finite() {
            let t = n as f64 * cfg.dt;
            state.t = t;
            info!("non-finite values at t = {t:.6}, stopping");
            status = RunStatus::OverflowStop(t);
            break;
        }
    }
    if status == RunStatus::Completed {
        if let Some(t) = resolution_warned {
            status = RunStatus::ResolutionWarn(t);
        }
    }
    Ok(RunRecord { samples, snapshots, status, warnings, final_state: state })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Convergence order from the errors `error_at(dt)` over `dts`.
pub fn observed_order<F: FnMut(f64) -> Result<f64>>(mut error_at: F, dts: &[f64]) -> Result<f64> {
    if dts.len() < 2 {
        return Err(Error::invalid("dt_list", "need at least two step sizes"));
    }
    let errs = dts.iter().map(|&dt| error_at(dt)).collect::<Result<Vec<_>>>()?;
    Ok(loglog_slope(dts, &errs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::Scheme;
    use crate::spectral::forward_transform;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn functional_of_a_constant() {
        let g = Grid::new(1.5, 0.5, 8, 16).unwrap();
        let a = c(0.6, -0.8);
        let uh = forward_transform(&Field::from_fn(&g, |_, _| a), &g).unwrap();
        let m = conserved_functional(&uh, &g, &ModelParams::nls().with_off_axis(2.0, Axes::BOTH)).unwrap();
        let expect = (2.0 * PI).powi(2) * 1.5 * 0.5 * a.norm_sqr();
        assert!((m - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn functional_reduces_to_plain_mass() {
        let g = Grid::square(2.0, 32).unwrap();
        let u = Field::from_fn(&g, |x, y| c((-(x * x + y * y)).exp(), 0.2 * x * (-(x * x)).exp()));
        let uh = forward_transform(&u, &g).unwrap();
        let plain = u.sum_sq() * g.cell_area();
        for p in [ModelParams::nls(), ModelParams::nls().with_off_axis(1.0, Axes::NONE)] {
            let m = conserved_functional(&uh, &g, &p).unwrap();
            assert!((m - plain).abs() < 1e-12 * plain);
        }
        let m1 = conserved_functional(&uh, &g, &ModelParams::nls().with_off_axis(1.0, Axes::X1)).unwrap();
        assert!(m1 > plain);
    }

    #[test]
    fn euler_control_has_order_one() {
        // y' = i y, y(0) = 1, to t = 1
        let order = observed_order(
            |dt| {
                let n = (1.0 / dt).round() as usize;
                let mut y = c(1.0, 0.0);
                for _ in 0..n {
                    y += y * c(0.0, dt);
                }
                Ok((y - c(1.0f64.cos(), 1.0f64.sin())).norm())
            },
            &[0.01, 0.005, 0.0025, 0.00125],
        )
        .unwrap();
        assert!((order - 1.0).abs() < 0.05, "{order}");
        assert!(observed_order(|_| Ok(1.0), &[0.1]).is_err());
    }

    #[test]
    fn lawson_order_on_constant_mode() {
        let g = Grid::new(1.0, 1.0, 4, 4).unwrap();
        let a = c(1.1, 0.3);
        let t = 1.0;
        let exact = a * Complex64::from_polar(1.0, a.norm_sqr() * t);
        let u0 = Field::from_fn(&g, |_, _| a);
        let order = observed_order(
            |dt| {
                let cfg = IntegratorConfig::new(dt, t).with_scheme(Scheme::IfRk4);
                let rec = evolve(&u0, &cfg, &g, &ModelParams::nls(), &Monitors::default(), None)?;
                Ok((rec.final_state.u_hat.values[0] / 16.0 - exact).norm())
            },
            &[0.1, 0.05, 0.025, 0.0125],
        )
        .unwrap();
        assert!((order - 4.0).abs() <= 0.1, "{order}");
    }

    #[test]
    fn record_bookkeeping() {
        let g = Grid::square(2.0, 64).unwrap();
        let u0 = Field::from_fn(&g, |x, y| c(0.5 * (-(x * x + y * y)).exp(), 0.0));
        let cfg = IntegratorConfig::new(0.01, 0.1);
        let mon = Monitors::default().with_snapshots(vec![0.05, 0.0, 0.1]);
        let rec = evolve(&u0, &cfg, &g, &ModelParams::nls(), &mon, None).unwrap();
        assert_eq!(rec.samples.len(), 11);
        assert_eq!(rec.samples[0].mass_rel_drift, 0.0);
        assert!(rec.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert!((rec.samples[10].t - 0.1).abs() < 1e-15);
        assert_eq!(rec.snapshots.len(), 3);
        assert_eq!(rec.snapshots[0].field.space, u0.space);
        assert!(rec.snapshots[0].field.max_abs_diff(&u0) <= 1e-15);
        assert!((rec.snapshot_near(0.049).unwrap().t - 0.05).abs() < 1e-12);
        assert_eq!(rec.status, RunStatus::Completed);
        assert!(rec.max_mass_drift() < 1e-8);
        assert!((rec.final_state.t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn drift_stop_fires_at_first_exceeding_sample() {
        let g = Grid::square(2.0, 32).unwrap();
        let u0 = Field::from_fn(&g, |x, y| c(0.5 * (-(x * x + y * y)).exp(), 0.0));
        let cfg = IntegratorConfig::new(0.01, 0.2);
        let full = evolve(&u0, &cfg, &g, &ModelParams::nls(), &Monitors::default(), None).unwrap();
        let drifts: Vec<f64> = full.samples.iter().map(|s| s.mass_rel_drift).collect();
        // a threshold between two sample drifts
        let mut sorted = drifts[1..].to_vec();
        sorted.sort_by(f64::total_cmp);
        let thr = 0.5 * (sorted[sorted.len() / 2] + sorted[sorted.len() / 2 + 1]);
        if thr <= 0.0 {
            return;
        }
        let mon = Monitors { mass_drift_stop: thr, ..Monitors::default() };
        let rec = evolve(&u0, &cfg, &g, &ModelParams::nls(), &mon, None).unwrap();
        let first = drifts.iter().position(|&d| d > thr).unwrap();
        assert_eq!(rec.samples.len(), first + 1);
        assert_eq!(rec.status, RunStatus::MassDriftStop(full.samples[first].t));
        assert!(rec.samples.last().unwrap().mass_rel_drift > thr);
    }

    #[test]
    fn overflow_is_a_status() {
        let g = Grid::square(1.0, 16).unwrap();
        let u0 = Field::from_fn(&g, |x, y| c(40.0 * (-(x * x + y * y)).exp(), 0.0));
        let cfg = IntegratorConfig::new(0.05, 5.0).with_scheme(Scheme::IfRk4);
        let mon = Monitors { mass_drift_stop: 1e300, ..Monitors::default() };
        let rec = evolve(&u0, &cfg, &g, &ModelParams::nls().with_sigma(3.0), &mon, None).unwrap();
        assert!(matches!(rec.status, RunStatus::OverflowStop(_)), "{:?}", rec.status);
        assert!(rec.status.is_blow_up());
    }

    #[test]
    fn configuration_errors() {
        let g = Grid::square(1.0, 8).unwrap();
        let u0 = Field::zeros(&g, Space::Physical);
        let bad = IntegratorConfig::new(-1.0, 1.0);
        let e = evolve(&u0, &bad, &g, &ModelParams::nls(), &Monitors::default(), None).unwrap_err();
        assert!(matches!(e, Error::Invalid { ref field, .. } if field == "dt"));
        let mon = Monitors { sample_every: 0, ..Monitors::default() };
        assert!(evolve(&u0, &IntegratorConfig::default(), &g, &ModelParams::nls(), &mon, None).is_err());
    }

    fn ground_state_l3() -> (Grid, Field) {
        let g = Grid::square(3.0, 128).unwrap();
        let st = crate::stationary::ground_state(&g, &crate::stationary::NewtonOptions::default()).unwrap();
        (g, st.q)
    }

    fn orbit_error(g: &Grid, q: &Field, cfg: &IntegratorConfig) -> f64 {
        let rec = evolve(q, cfg, g, &ModelParams::nls(), &Monitors { sample_every: 1000000, ..Monitors::default() }, None)
            .unwrap();
        let mut u = rec.final_state.u_hat.clone();
        crate::spectral::Fft2::new(g).inverse_inplace(&mut u.values);
        let rot = Complex64::from_polar(1.0, rec.final_state.t);
        u.values.iter().zip(&q.values).map(|(a, b)| (a - rot * b).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn ground_state_orbit() {
        let (g, q) = ground_state_l3();
        let cfg = IntegratorConfig::new(1e-3, 1.0);
        let rec = evolve(&q, &cfg, &g, &ModelParams::nls(), &Monitors::default(), None).unwrap();
        assert_eq!(rec.status, RunStatus::Completed);
        assert!(rec.max_mass_drift() <= 1e-11, "{}", rec.max_mass_drift());
        assert!(orbit_error(&g, &q, &cfg) <= 1e-8);
        let qmax = q.max_abs();
        assert!(rec.linf().iter().all(|m| (m - qmax).abs() <= 1e-7));
    }

    #[test]
    fn composite_order_on_the_orbit() {
        let (g, q) = ground_state_l3();
        let order = observed_order(|dt| Ok(orbit_error(&g, &q, &IntegratorConfig::new(dt, 1.0))), &[0.2, 0.1, 0.05, 0.025])
            .unwrap();
        assert!(order >= 3.0, "{order}");
    }

    fn dnls_bump(g: &Grid) -> Field {
        Field::from_fn(g, |x, y| c(1.5 * (-(x * x + y * y)).exp(), 0.0))
    }

    #[test]
    fn moving_frame_agrees_with_fixed_frame() {
        let g = Grid::square(3.0, 128).unwrap();
        let p = ModelParams::nls().with_delta(0.0, 1.0);
        let u0 = dnls_bump(&g);
        let mon = Monitors::default();
        let errs: Vec<f64> = [0.01, 0.005]
            .iter()
            .map(|&dt| {
                let cfg = IntegratorConfig::new(dt, 0.2);
                let fixed = evolve(&u0, &cfg, &g, &p, &mon, None).unwrap();
                let moving = evolve(&u0, &cfg, &g, &p, &mon, Some(Axes::X2)).unwrap();
                assert!(moving.final_state.frame.unwrap().y[1].abs() > 1e-3);
                assert!(moving.samples.iter().all(|s| s.v[0] == 0.0));
                moving.final_state.lab_frame(&g).max_abs_diff(&fixed.final_state.u_hat)
                    / fixed.final_state.u_hat.max_abs()
            })
            .collect();
        assert!(errs[1] < 1e-5, "{errs:?}");
        assert!(errs[0] / errs[1] > 6.0, "{errs:?}");
    }

    #[test]
    fn frame_keeps_the_maximum_at_the_origin() {
        let g = Grid::square(3.0, 128).unwrap();
        let k = 2.0 / 3.0;
        let u0 = Field::from_fn(&g, |x, y| Complex64::from_polar((-(x * x + y * y)).exp(), k * x + 0.5 * k * y));
        let cfg = IntegratorConfig::new(2e-3, 0.4);
        let mut st = RunState::new(forward_transform(&u0, &g).unwrap()).with_frame(Axes::BOTH);
        let mut stepper = Stepper::new(&g, &ModelParams::nls(), &cfg).unwrap();
        let probe = crate::evolution::frame::OriginProbe::new(&g);
        for _ in 0..cfg.steps() {
            stepper.advance(&mut st).unwrap();
            let (grad, _) = probe.density_derivatives(&st.u_hat.values);
            assert!(grad[0].hypot(grad[1]) <= 1e-6, "{grad:?} at {}", st.t);
        }
        let f = st.frame.unwrap();
        assert!((f.v[0] - 2.0 * k).abs() < 1e-6 && (f.v[1] - k).abs() < 1e-6, "{:?}", f.v);
        assert!((f.y[0] - 0.4 * 2.0 * k).abs() < 1e-6);
    }

    #[test]
    fn identical_runs_are_bitwise_equal() {
        let g = Grid::square(3.0, 32).unwrap();
        let p = ModelParams::nls().with_delta(0.0, 1.0).with_off_axis(0.5, Axes::X1);
        let u0 = dnls_bump(&g);
        let cfg = IntegratorConfig::new(0.01, 0.1);
        let mon = Monitors::default().with_snapshots(vec![0.05]);
        let a = evolve(&u0, &cfg, &g, &p, &mon, Some(Axes::BOTH)).unwrap();
        let b = evolve(&u0, &cfg, &g, &p, &mon, Some(Axes::BOTH)).unwrap();
        assert_eq!(a, b);
    }
}
