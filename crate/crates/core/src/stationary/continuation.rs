use std::sync::Arc;

use log::{debug, info};

use crate::error::{Error, Result};
use crate::spectral::{Fft2, Grid, ModelParams};
use crate::stationary::solver::{initial_iterate, newton_with_fft, NewtonOptions, StationaryProblem, StationaryState};

/// Parameter path for continuation. Each leg runs from the previous
/// waypoint (or the seed) to the next one in substeps that change every
/// continuous parameter by at most `max_step`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationSchedule {
    pub waypoints: Vec<ModelParams>,
    pub max_step: f64,
    /// Step halvings allowed after a failed substep before giving up.
    pub max_halvings: usize,
}

impl ContinuationSchedule {
    pub fn new(waypoints: Vec<ModelParams>) -> Self {
        ContinuationSchedule { waypoints, max_step: 0.2, max_halvings: 4 }
    }

    pub fn with_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }

    /// Waypoints from the cubic NLS to `target`: raise `sigma` first, then
    /// switch on `delta`, then `epsilon`.
    pub fn from_ground_state(target: &ModelParams) -> Self {
        let mut w = Vec::new();
        let mut p = ModelParams::nls();
        if target.sigma != p.sigma {
            p.sigma = target.sigma;
            w.push(p);
        }
        if target.delta != p.delta {
            p.delta = target.delta;
            w.push(p);
        }
        if target.epsilon != p.epsilon || target.axes != p.axes {
            p.epsilon = target.epsilon;
            p.axes = target.axes;
            w.push(p);
        }
        ContinuationSchedule::new(w)
    }
}

fn largest_change(a: &ModelParams, b: &ModelParams) -> f64 {
    [a.epsilon - b.epsilon, a.delta[0] - b.delta[0], a.delta[1] - b.delta[1], a.sigma - b.sigma]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
}

fn interpolate(a: &ModelParams, b: &ModelParams, s: f64) -> ModelParams {
    if s >= 1.0 {
        return *b;
    }
    let lerp = |x: f64, y: f64| x + s * (y - x);
    ModelParams {
        epsilon: lerp(a.epsilon, b.epsilon),
        axes: b.axes,
        delta: [lerp(a.delta[0], b.delta[0]), lerp(a.delta[1], b.delta[1])],
        sigma: lerp(a.sigma, b.sigma),
    }
}

pub fn continuation_solve(schedule: &ContinuationSchedule, seed: &StationaryState) -> Result<StationaryState> {
    continuation_solve_with(schedule, seed, &NewtonOptions::default())
}

/// Walks the schedule, using each converged state as the next initial
/// iterate. The returned state carries the whole path, seed included.
pub fn continuation_solve_with(
    schedule: &ContinuationSchedule,
    seed: &StationaryState,
    opts: &NewtonOptions,
) -> Result<StationaryState> {
    if !(schedule.max_step > 0.0) {
        return Err(Error::invalid("stationary.max_step", "must be positive"));
    }
    let grid = seed.grid;
    let fft = Arc::new(Fft2::new(&grid));
    let mut state = seed.clone();
    for (leg, target) in schedule.waypoints.iter().enumerate() {
        target.validate()?;
        if *target == state.params {
            continue;
        }
        let start = state.params;
        let substeps = (largest_change(&start, target) / schedule.max_step - 1e-9).ceil().max(1.0);
        let mut ds = 1.0 / substeps;
        let mut s = 0.0;
        let mut failures = 0;
        while s < 1.0 {
            let s_next = if s + ds > 1.0 - 1e-12 { 1.0 } else { s + ds };
            let params = interpolate(&start, target, s_next);
            let problem = StationaryProblem::new(grid, params)?;
            match newton_with_fft(&state.q, &problem, opts, fft.clone()) {
                Ok(next) => {
                    debug!("leg {leg}: s = {s_next:.4}, {} iterations, residual {:.2e}", next.iterations, next.residual_norm);
                    let mut path = std::mem::take(&mut state.continuation_path);
                    path.push((params, next.residual_norm));
                    state = StationaryState { continuation_path: path, ..next };
                    s = s_next;
                    failures = 0;
                }
                Err(e) if e.is_configuration() => return Err(e),
                Err(e) => {
                    failures += 1;
                    if failures > schedule.max_halvings {
                        return Err(Error::ContinuationStalled { leg, params });
                    }
                    debug!("leg {leg}: substep to s = {s_next:.4} failed ({e}), halving");
                    ds /= 2.0;
                }
            }
        }
        info!("continuation leg {leg} done at {target:?}");
    }
    Ok(state)
}

/// Cubic NLS ground state from the `sech^2` iterate.
pub fn ground_state(grid: &Grid, opts: &NewtonOptions) -> Result<StationaryState> {
    let problem = StationaryProblem::new(*grid, ModelParams::nls())?;
    let q0 = initial_iterate(grid, "sech2")?;
    newton_with_fft(&q0, &problem, opts, Arc::new(Fft2::new(grid)))
}

/// Ground state followed by continuation to `target`.
pub fn solve_from_ground_state(grid: &Grid, target: &ModelParams, opts: &NewtonOptions) -> Result<StationaryState> {
    let seed = ground_state(grid, opts)?;
    continuation_solve_with(&ContinuationSchedule::from_ground_state(target), &seed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Axes, Axis};

    fn grid() -> Grid {
        Grid::square(3.0, 64).unwrap()
    }

    #[test]
    fn schedule_order() {
        let t = ModelParams::nls().with_sigma(2.0).with_delta(0.0, 1.0).with_off_axis(1.0, Axes::BOTH);
        let s = ContinuationSchedule::from_ground_state(&t);
        assert_eq!(s.waypoints.len(), 3);
        assert_eq!(s.waypoints[0], ModelParams::nls().with_sigma(2.0));
        assert_eq!(s.waypoints[1].delta, [0.0, 1.0]);
        assert_eq!(s.waypoints[1].epsilon, 0.0);
        assert_eq!(s.waypoints[2], t);
        assert!(ContinuationSchedule::from_ground_state(&ModelParams::nls()).waypoints.is_empty());
        assert_eq!(s.max_step, 0.2);
    }

    #[test]
    fn interpolation_endpoints() {
        let a = ModelParams::nls();
        let b = ModelParams::nls().with_delta(0.0, 1.0);
        assert_eq!(interpolate(&a, &b, 1.0), b);
        assert!((interpolate(&a, &b, 0.2).delta[1] - 0.2).abs() < 1e-15);
        assert!((largest_change(&a, &b) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn waypoint_equal_to_seed_returns_seed() {
        let seed = ground_state(&grid(), &NewtonOptions::default()).unwrap();
        let out = continuation_solve(&ContinuationSchedule::new(vec![ModelParams::nls()]), &seed).unwrap();
        assert_eq!(out, seed);
    }

    #[test]
    fn off_axis_continuation_elongates_along_x1() {
        let g = grid();
        let target = ModelParams::nls().with_off_axis(1.0, Axes::X1);
        let st = solve_from_ground_state(&g, &target, &NewtonOptions::default()).unwrap();
        assert_eq!(st.params, target);
        assert_eq!(st.continuation_path.len(), 6);
        assert!(st.residual_norm <= 1e-10);
        let x1 = g.nodes(Axis::X1);
        let x2 = g.nodes(Axis::X2);
        let (mut m1, mut m2) = (0.0, 0.0);
        let mut imag = 0.0f64;
        for i in 0..g.n1 {
            for j in 0..g.n2 {
                let z = st.q.get(i, j);
                m1 += x1[i] * x1[i] * z.norm_sqr();
                m2 += x2[j] * x2[j] * z.norm_sqr();
                imag = imag.max(z.im.abs());
            }
        }
        assert!(m1 / m2 > 1.0);
        assert!(imag <= 1e-8 * st.q.max_abs());
    }
}
