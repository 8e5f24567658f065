use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Axes, Axis, Grid, ModelParams, RhsEvaluator, Space};

use super::RunState;

/// Point values at the origin node of a spectral field and its first and
/// second derivatives, by direct summation (`e^{i xi . x}` is `(-1)^{k1+k2}`
/// at the origin node). Odd derivatives drop the Nyquist modes, which have
/// no antisymmetric partner.
#[derive(Debug, Clone)]
pub(crate) struct OriginProbe {
    xi1: Vec<f64>,
    xi2: Vec<f64>,
    odd1: Vec<f64>,
    odd2: Vec<f64>,
    n2: usize,
    scale: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Jet {
    f: Complex64,
    d: [Complex64; 2],
    dd: [[Complex64; 2]; 2],
}

impl OriginProbe {
    pub(crate) fn new(grid: &Grid) -> Self {
        let odd = |axis: Axis| {
            let mut xi = grid.wavenumbers(axis);
            let n = grid.count(axis);
            xi[n / 2] = 0.0;
            xi
        };
        OriginProbe {
            xi1: grid.wavenumbers(Axis::X1),
            xi2: grid.wavenumbers(Axis::X2),
            odd1: odd(Axis::X1),
            odd2: odd(Axis::X2),
            n2: grid.n2,
            scale: 1.0 / grid.len() as f64,
        }
    }

    fn jet(&self, v: &[Complex64], second: bool) -> Jet {
        let mut j = Jet::default();
        let i = Complex64::i();
        for k1 in 0..self.xi1.len() {
            let (a, oa) = (self.xi1[k1], self.odd1[k1]);
            let row = &v[k1 * self.n2..(k1 + 1) * self.n2];
            let s1 = if k1 % 2 == 0 { 1.0 } else { -1.0 };
            for (k2, &z) in row.iter().enumerate() {
                let (b, ob) = (self.xi2[k2], self.odd2[k2]);
                let z = if k2 % 2 == 0 { z * s1 } else { -z * s1 };
                j.f += z;
                j.d[0] += z * oa;
                j.d[1] += z * ob;
                if second {
                    j.dd[0][0] += z * (a * a);
                    j.dd[0][1] += z * (oa * ob);
                    j.dd[1][1] += z * (b * b);
                }
            }
        }
        j.f *= self.scale;
        for d in &mut j.d {
            *d *= i * self.scale;
        }
        for r in 0..2 {
            for c in 0..2 {
                j.dd[r][c] *= -self.scale;
            }
        }
        j.dd[1][0] = j.dd[0][1];
        j
    }

    /// Gradient and Hessian of `rho = |u|^2` at the origin.
    #[cfg(test)]
    pub(crate) fn density_derivatives(&self, u_hat: &[Complex64]) -> ([f64; 2], [[f64; 2]; 2]) {
        let u = self.jet(u_hat, true);
        let mut g = [0.0; 2];
        let mut h = [[0.0; 2]; 2];
        for r in 0..2 {
            g[r] = 2.0 * (u.f.conj() * u.d[r]).re;
            for c in 0..2 {
                h[r][c] = 2.0 * (u.dd[r][c].conj() * u.f + u.d[r].conj() * u.d[c]).re;
            }
        }
        (g, h)
    }

    /// Velocity keeping `grad rho(0) = 0` in time, from `H v = -grad R(0)` with
    /// `R = 2 Re(conj(u) w)` and `w` the frame-free right-hand side.
    pub(crate) fn velocity(&self, u_hat: &[Complex64], w_hat: &[Complex64], axes: Axes) -> Result<[f64; 2]> {
        if axes.is_empty() {
            return Ok([0.0; 2]);
        }
        let u = self.jet(u_hat, true);
        let w = self.jet(w_hat, false);
        let mut h = [[0.0; 2]; 2];
        let mut b = [0.0; 2];
        for r in 0..2 {
            b[r] = 2.0 * (u.d[r].conj() * w.f + u.f.conj() * w.d[r]).re;
            for c in 0..2 {
                h[r][c] = 2.0 * (u.dd[r][c].conj() * u.f + u.d[r].conj() * u.d[c]).re;
            }
        }
        let hnorm2 = h.iter().flatten().map(|x| x * x).sum::<f64>();
        if axes.x1 && axes.x2 {
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if !(det.abs() >= 1e-12 * hnorm2) || det == 0.0 {
                return Err(Error::IllConditionedFrame { det });
            }
            Ok([(-b[0] * h[1][1] + b[1] * h[0][1]) / det, (-b[1] * h[0][0] + b[0] * h[1][0]) / det])
        } else {
            let j = if axes.x1 { 0 } else { 1 };
            let det = h[j][j];
            if !(det.abs() >= 1e-12 * hnorm2.sqrt()) || det == 0.0 {
                return Err(Error::IllConditionedFrame { det });
            }
            let mut v = [0.0; 2];
            v[j] = -b[j] / det;
            Ok(v)
        }
    }
}

/// Frame velocity for the current state; zero when the state has no frame.
pub fn moving_frame_velocity(state: &RunState, grid: &Grid, params: &ModelParams) -> Result<[f64; 2]> {
    state.u_hat.check(grid, Space::Spectral)?;
    let Some(frame) = &state.frame else {
        return Ok([0.0; 2]);
    };
    let mut ev = RhsEvaluator::new(grid, params);
    let mut w = vec![Complex64::default(); grid.len()];
    ev.eval_into(&state.u_hat.values, &mut w);
    OriginProbe::new(grid).velocity(&state.u_hat.values, &w, frame.pinned_axis)
}
