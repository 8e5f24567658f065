use std::sync::Arc;

use log::debug;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{density_power, gamma_value, Axis, Fft2, Field, Grid, ModelParams, Space};
use crate::stationary::gmres::{gmres_solve, GmresOptions};

/// Below this sup norm an iterate counts as the trivial solution.
pub const ZERO_THRESHOLD: f64 = 1e-6;

/// Stationary states `u = e^{i omega t} Q` with `omega = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryProblem {
    pub grid: Grid,
    pub params: ModelParams,
    pub omega: f64,
}

impl StationaryProblem {
    pub fn new(grid: Grid, params: ModelParams) -> Result<Self> {
        grid.validate()?;
        params.validate()?;
        Ok(StationaryProblem { grid, params, omega: 1.0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState {
    pub grid: Grid,
    pub params: ModelParams,
    /// Physical-space profile.
    pub q: Field,
    /// Max modulus of the fixed-point residual.
    pub residual_norm: f64,
    /// Newton iterations of the last solve.
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub continuation_path: Vec<(ModelParams, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub maxiter: usize,
    pub gmres: GmresOptions,
    /// A GMRES solve that stops short of its tolerance is still used as the
    /// Newton correction if its relative residual is below this.
    pub inexact_accept: f64,
    /// Rescale the starting iterate along its ray before the first step.
    pub rescale_initial: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, maxiter: 30, gmres: GmresOptions::default(), inexact_accept: 1e-2, rescale_initial: true }
    }
}

/// Real and imaginary parts of `Q`, each stored as DFT coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    pub alpha: Field,
    pub beta: Field,
}

impl SpectralPair {
    pub fn from_physical(q: &Field, grid: &Grid) -> Result<Self> {
        q.check(grid, Space::Physical)?;
        let fft = Fft2::new(grid);
        Ok(Self::split(&q.values, grid, &fft))
    }

    fn split(q: &[Complex64], grid: &Grid, fft: &Fft2) -> Self {
        let mut a: Vec<Complex64> = q.iter().map(|z| Complex64::new(z.re, 0.0)).collect();
        let mut b: Vec<Complex64> = q.iter().map(|z| Complex64::new(z.im, 0.0)).collect();
        fft.forward_inplace(&mut a);
        fft.forward_inplace(&mut b);
        SpectralPair {
            alpha: Field { values: a, n1: grid.n1, n2: grid.n2, space: Space::Spectral },
            beta: Field { values: b, n1: grid.n1, n2: grid.n2, space: Space::Spectral },
        }
    }

    fn join(&self, grid: &Grid, fft: &Fft2) -> Result<Vec<Complex64>> {
        self.alpha.check(grid, Space::Spectral)?;
        self.beta.check(grid, Space::Spectral)?;
        let mut a = self.alpha.values.clone();
        let mut b = self.beta.values.clone();
        fft.inverse_inplace(&mut a);
        fft.inverse_inplace(&mut b);
        Ok(a.iter().zip(&b).map(|(x, y)| x + Complex64::i() * y).collect())
    }

    pub fn to_physical(&self, grid: &Grid) -> Result<Field> {
        let fft = Fft2::new(grid);
        Ok(Field { values: self.join(grid, &fft)?, n1: grid.n1, n2: grid.n2, space: Space::Physical })
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.max_abs().max(self.beta.max_abs())
    }
}

/// The map `Q -> Q - IDFT(Gamma_hat DFT(|Q|^{2 sigma} Q))` and its
/// linearization, acting on physical values.
pub(crate) struct FixedPoint {
    sigma: f64,
    gamma: Vec<f64>,
    fft: Arc<Fft2>,
    work: Vec<Complex64>,
    // linearization state
    q: Vec<Complex64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FixedPoint {
    pub(crate) fn new(problem: &StationaryProblem, fft: Arc<Fft2>) -> Self {
        let g = &problem.grid;
        let xi1 = g.wavenumbers(Axis::X1);
        let xi2 = g.wavenumbers(Axis::X2);
        let mut gamma = Vec::with_capacity(g.len());
        for &k1 in &xi1 {
            for &k2 in &xi2 {
                gamma.push(gamma_value(&problem.params, k1, k2));
            }
        }
        FixedPoint {
            sigma: problem.params.sigma,
            gamma,
            fft,
            work: vec![Complex64::default(); g.len()],
            q: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// `work = IDFT(Gamma_hat DFT(work))`
    fn smooth_work(&mut self) {
        self.fft.forward_inplace(&mut self.work);
        for (w, g) in self.work.iter_mut().zip(&self.gamma) {
            *w *= *g;
        }
        self.fft.inverse_inplace(&mut self.work);
    }

    pub(crate) fn residual(&mut self, q: &[Complex64]) -> Vec<Complex64> {
        let s = self.sigma;
        for (w, z) in self.work.iter_mut().zip(q) {
            *w = z * density_power(z.norm_sqr(), s);
        }
        self.smooth_work();
        q.iter().zip(&self.work).map(|(z, w)| z - w).collect()
    }

    /// Factor `c` with `c^{2 sigma} = <q, q> / <q, IDFT(Gamma_hat DFT(g(q)))>`, which makes
    /// the residual of `c q` orthogonal to `q`; exactly 1 at a solution.
    pub(crate) fn ray_scale(&mut self, q: &[Complex64]) -> Option<f64> {
        let s = self.sigma;
        for (w, z) in self.work.iter_mut().zip(q) {
            *w = z * density_power(z.norm_sqr(), s);
        }
        self.smooth_work();
        let num: f64 = q.iter().map(|z| z.norm_sqr()).sum();
        let den: f64 = q.iter().zip(&self.work).map(|(z, w)| z.re * w.re + z.im * w.im).sum();
        (num > 0.0 && den > 0.0).then(|| (num / den).powf(1.0 / (2.0 * s)))
    }

    pub(crate) fn linearize(&mut self, q: &[Complex64]) {
        let s = self.sigma;
        self.q = q.to_vec();
        self.a = q.iter().map(|z| density_power(z.norm_sqr(), s)).collect();
        self.b = q
            .iter()
            .map(|z| {
                let rho = z.norm_sqr();
                if rho == 0.0 {
                    0.0
                } else {
                    2.0 * s * density_power(rho, s) / rho
                }
            })
            .collect();
    }

    /// `J h = h - IDFT(Gamma_hat DFT(rho^sigma h + 2 sigma rho^{sigma-1} Re(conj(Q) h) Q))`
    pub(crate) fn apply_jacobian(&mut self, h: &[Complex64]) -> Vec<Complex64> {
        for i in 0..h.len() {
            let q = self.q[i];
            let proj = q.re * h[i].re + q.im * h[i].im;
            self.work[i] = h[i] * self.a[i] + q * (self.b[i] * proj);
        }
        self.smooth_work();
        h.iter().zip(&self.work).map(|(z, w)| z - w).collect()
    }
}

fn sup(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Split-form residual `M(q_hat)` of the stationary fixed point.
///
/// The residual is formed from the complex equation for `Q = alpha + i beta`
/// and returned as the DFTs of its real and imaginary parts.
pub fn fixed_point_residual(q_hat: &SpectralPair, problem: &StationaryProblem) -> Result<SpectralPair> {
    let grid = &problem.grid;
    let fft = Arc::new(Fft2::new(grid));
    let q = q_hat.join(grid, &fft)?;
    let mut op = FixedPoint::new(problem, fft.clone());
    let r = op.residual(&q);
    Ok(SpectralPair::split(&r, grid, &fft))
}

/// Directional derivative of [`fixed_point_residual`] at `q_hat` along `h_hat`.
pub fn jacobian_vector_product(
    q_hat: &SpectralPair,
    h_hat: &SpectralPair,
    problem: &StationaryProblem,
) -> Result<SpectralPair> {
    let grid = &problem.grid;
    let fft = Arc::new(Fft2::new(grid));
    let q = q_hat.join(grid, &fft)?;
    let h = h_hat.join(grid, &fft)?;
    let mut op = FixedPoint::new(problem, fft.clone());
    op.linearize(&q);
    let jh = op.apply_jacobian(&h);
    Ok(SpectralPair::split(&jh, grid, &fft))
}

/// Max modulus of the physical fixed-point residual at `q`.
pub fn residual_norm(q: &Field, problem: &StationaryProblem) -> Result<f64> {
    q.check(&problem.grid, Space::Physical)?;
    let mut op = FixedPoint::new(problem, Arc::new(Fft2::new(&problem.grid)));
    Ok(sup(&op.residual(&q.values)))
}

/// Newton's method with GMRES inner solves and the default GMRES settings.
pub fn newton_solve(q0: &Field, problem: &StationaryProblem, tol: f64, maxiter: usize) -> Result<StationaryState> {
    newton_solve_with(q0, problem, &NewtonOptions { tol, maxiter, ..NewtonOptions::default() })
}

pub fn newton_solve_with(q0: &Field, problem: &StationaryProblem, opts: &NewtonOptions) -> Result<StationaryState> {
    let fft = Arc::new(Fft2::new(&problem.grid));
    newton_with_fft(q0, problem, opts, fft)
}

pub(crate) fn newton_with_fft(
    q0: &Field,
    problem: &StationaryProblem,
    opts: &NewtonOptions,
    fft: Arc<Fft2>,
) -> Result<StationaryState> {
    q0.check(&problem.grid, Space::Physical)?;
    let mut op = FixedPoint::new(problem, fft);
    let mut q = q0.values.clone();
    if opts.rescale_initial {
        if let Some(c) = op.ray_scale(&q) {
            debug!("initial iterate scaled by {c:.6}");
            q.iter_mut().for_each(|z| *z *= c);
        }
    }
    // a real iterate of a problem without steepening stays real; dropping the
    // roundoff in the imaginary part keeps the phase direction out of the solve
    let real = !problem.params.has_steepening() && q.iter().all(|z| z.im == 0.0);
    let realify = |v: &mut Vec<Complex64>| {
        if real {
            v.iter_mut().for_each(|z| z.im = 0.0);
        }
    };
    let mut r = op.residual(&q);
    realify(&mut r);
    let mut res = sup(&r);
    let mut history = vec![res];
    let mut it = 0;
    loop {
        if sup(&q) < ZERO_THRESHOLD {
            return Err(Error::ConvergedToZero);
        }
        if !res.is_finite() {
            return Err(Error::MaxIterExceeded { max_iter: opts.maxiter, residual: res });
        }
        if res <= opts.tol {
            break;
        }
        if it == opts.maxiter {
            return Err(Error::MaxIterExceeded { max_iter: opts.maxiter, residual: res });
        }
        op.linearize(&q);
        let step = match gmres_solve(
            |h: &Vec<Complex64>| {
                let mut jh = op.apply_jacobian(h);
                realify(&mut jh);
                jh
            },
            &r,
            &opts.gmres,
        ) {
            Ok(sol) => sol.x,
            Err(fail) if fail.residual <= opts.inexact_accept => {
                debug!("newton {it}: inexact GMRES step, relative residual {:.2e}", fail.residual);
                fail.best
            }
            Err(fail) => return Err(fail.into()),
        };
        for (z, d) in q.iter_mut().zip(&step) {
            *z -= d;
        }
        r = op.residual(&q);
        realify(&mut r);
        res = sup(&r);
        history.push(res);
        it += 1;
        debug!("newton {it}: residual {res:.3e}");
    }
    Ok(StationaryState {
        grid: problem.grid,
        params: problem.params,
        q: Field { values: q, n1: problem.grid.n1, n2: problem.grid.n2, space: Space::Physical },
        residual_norm: res,
        iterations: it,
        residual_history: history,
        continuation_path: vec![(problem.params, res)],
    })
}

/// Named analytic starting profile: `"sech2"` is `sech^2(|x|)`, `"gaussian"`
/// is `exp(-|x|^2)`.
pub fn initial_iterate(grid: &Grid, kind: &str) -> Result<Field> {
    let f: fn(f64) -> f64 = match kind {
        "sech2" => |r| {
            let s = 1.0 / r.cosh();
            s * s
        },
        "gaussian" => |r| (-r * r).exp(),
        other => return Err(Error::invalid("initial.kind", format!("unknown initial iterate `{other}`"))),
    };
    Ok(Field::from_real_fn(grid, |x1, x2| f(x1.hypot(x2))))
}
