use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{Axis, Fft2, Field, Grid, ModelParams, Space, Tables};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `rho^sigma` with the common integer powers done by multiplication.
#[inline]
pub fn density_power(rho: f64, sigma: f64) -> f64 {
    if sigma == 1.0 {
        rho
    } else if sigma == 2.0 {
        rho * rho
    } else if sigma == 3.0 {
        rho * rho * rho
    } else if rho == 0.0 {
        0.0
    } else {
        rho.powf(sigma)
    }
}

/// `|u|^{2 sigma} u` at one point.
#[inline]
pub fn nonlinearity(u: Complex64, sigma: f64) -> Complex64 {
    u * density_power(u.norm_sqr(), sigma)
}

/// Pointwise `|u|^{2 sigma} u`.
pub fn apply_nonlinearity(u: &Field, sigma: f64) -> Result<Field> {
    if u.space != Space::Physical {
        return Err(crate::Error::Space { expected: "physical" });
    }
    let mut out = u.clone();
    for z in &mut out.values {
        *z = nonlinearity(*z, sigma);
    }
    Ok(out)
}

/// Zeroes every coefficient whose modulus is strictly below `tau`.
pub fn krasny_filter_inplace(values: &mut [Complex64], tau: f64) {
    if tau <= 0.0 {
        return;
    }
    let tau2 = tau * tau;
    for z in values.iter_mut() {
        if z.norm_sqr() < tau2 {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

pub fn krasny_filter(u_hat: &Field, tau: f64) -> Result<Field> {
    if u_hat.space != Space::Spectral {
        return Err(crate::Error::Space { expected: "spectral" });
    }
    let mut out = u_hat.clone();
    krasny_filter_inplace(&mut out.values, tau);
    Ok(out)
}

/// Largest coefficient modulus in the outer third of the wavenumbers (along
/// either axis), relative to the largest modulus overall.
pub fn resolution_indicator(u_hat: &Field) -> f64 {
    resolution_indicator_raw(&u_hat.values, u_hat.n1, u_hat.n2)
}

pub(crate) fn resolution_indicator_raw(values: &[Complex64], n1: usize, n2: usize) -> f64 {
    let in_band = |k: usize, n: usize| {
        let m = if k < n / 2 { k } else { n - k };
        3 * m >= n
    };
    let mut all = 0.0f64;
    let mut band = 0.0f64;
    for k1 in 0..n1 {
        let b1 = in_band(k1, n1);
        for k2 in 0..n2 {
            let a = values[k1 * n2 + k2].norm();
            all = all.max(a);
            if b1 || in_band(k2, n2) {
                band = band.max(a);
            }
        }
    }
    if all == 0.0 {
        0.0
    } else {
        band / all
    }
}

/// 2/3-rule mask: 1 for retained modes, 0 for the upper third along either axis.
pub fn dealias_mask(grid: &Grid) -> Vec<f64> {
    let m1 = grid.mode_numbers(Axis::X1);
    let m2 = grid.mode_numbers(Axis::X2);
    let mut mask = Vec::with_capacity(grid.len());
    for &a in &m1 {
        for &b in &m2 {
            let keep = 3 * a.unsigned_abs() < grid.n1 as u64 && 3 * b.unsigned_abs() < grid.n2 as u64;
            mask.push(if keep { 1.0 } else { 0.0 });
        }
    }
    mask
}

/// Pseudospectral evaluation of the evolution right-hand side
/// `L u_hat + N(u_hat)` with reusable buffers.
#[derive(Debug)]
pub struct RhsEvaluator {
    pub grid: Grid,
    pub params: ModelParams,
    pub tables: Tables,
    fft: Arc<Fft2>,
    mask: Option<Vec<f64>>,
    nonlinear: bool,
    phys: Vec<Complex64>,
}

impl RhsEvaluator {
    pub fn new(grid: &Grid, params: &ModelParams) -> Self {
        Self::with_fft(grid, params, Arc::new(Fft2::new(grid)))
    }

    pub fn with_fft(grid: &Grid, params: &ModelParams, fft: Arc<Fft2>) -> Self {
        RhsEvaluator {
            grid: *grid,
            params: *params,
            tables: Tables::new(grid, params),
            fft,
            mask: None,
            nonlinear: true,
            phys: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn with_dealiasing(mut self, on: bool) -> Self {
        self.mask = on.then(|| dealias_mask(&self.grid));
        self
    }

    /// Turns the nonlinear term off, leaving the diagonal linear flow.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn fft(&self) -> &Arc<Fft2> {
        &self.fft
    }

    /// Physical-space values of the last field passed to [`Self::nonlinear_into`].
    pub fn last_physical(&self) -> &[Complex64] {
        &self.phys
    }

    /// `out = N(u_hat) = i (1 - delta.xi) / P_eps * DFT(|u|^{2 sigma} u)`.
    pub fn nonlinear_into(&mut self, u_hat: &[Complex64], out: &mut [Complex64]) {
        if !self.nonlinear {
            out.iter_mut().for_each(|z| *z = Complex64::default());
            return;
        }
        let sigma = self.params.sigma;
        self.phys.copy_from_slice(u_hat);
        self.fft.inverse_inplace(&mut self.phys);
        for (o, u) in out.iter_mut().zip(&self.phys) {
            *o = nonlinearity(*u, sigma);
        }
        self.fft.forward_inplace(out);
        let forcing = &self.tables.forcing;
        match &self.mask {
            Some(mask) => {
                for ((o, f), m) in out.iter_mut().zip(forcing).zip(mask) {
                    *o = I * *o * (f * m);
                }
            }
            None => {
                for (o, f) in out.iter_mut().zip(forcing) {
                    *o = I * *o * *f;
                }
            }
        }
    }

    /// `out = L u_hat + N(u_hat)`.
    pub fn eval_into(&mut self, u_hat: &[Complex64], out: &mut [Complex64]) {
        self.nonlinear_into(u_hat, out);
        for ((o, u), d) in out.iter_mut().zip(u_hat).zip(&self.tables.dispersion) {
            *o += Complex64::new(u.im * d, -u.re * d);
        }
    }
}

/// Right-hand side of the spectral evolution equation for one field.
pub fn rhs_spectral(u_hat: &Field, grid: &Grid, params: &ModelParams) -> Result<Field> {
    u_hat.check(grid, Space::Spectral)?;
    let mut ev = RhsEvaluator::new(grid, params);
    let mut out = Field::zeros(grid, Space::Spectral);
    ev.eval_into(&u_hat.values, &mut out.values);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, Axes};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nonlinearity_examples() {
        let g = Grid::new(1.0, 1.0, 4, 4).unwrap();
        let zero = Field::zeros(&g, Space::Physical);
        assert_eq!(apply_nonlinearity(&zero, 1.0).unwrap(), zero);
        let two = Field::from_fn(&g, |_, _| c(2.0, 0.0));
        assert!(apply_nonlinearity(&two, 1.0).unwrap().values.iter().all(|z| *z == c(8.0, 0.0)));
        let i = Field::from_fn(&g, |_, _| c(0.0, 1.0));
        assert!(apply_nonlinearity(&i, 2.0).unwrap().values.iter().all(|z| *z == c(0.0, 1.0)));
        assert!((nonlinearity(c(0.5, 0.5), 1.5) - c(0.5, 0.5) * 0.5f64.powf(1.5)).norm() < 1e-15);
    }

    #[test]
    fn krasny_threshold_is_strict() {
        let g = Grid::new(1.0, 1.0, 2, 2).unwrap();
        let mut f = Field::zeros(&g, Space::Spectral);
        f.values = vec![c(1e-11, 0.0), c(1e-9, 0.0), c(1e-10, 0.0), c(0.0, 2e-10)];
        let out = krasny_filter(&f, 1e-10).unwrap();
        assert_eq!(out.values[0], c(0.0, 0.0));
        assert_eq!(out.values[1], c(1e-9, 0.0));
        assert_eq!(out.values[2], c(1e-10, 0.0));
        assert_eq!(out.values[3], c(0.0, 2e-10));
        assert_eq!(krasny_filter(&f, 0.0).unwrap(), f);
    }

    #[test]
    fn resolution_indicator_examples() {
        let g = Grid::new(1.0, 1.0, 16, 16).unwrap();
        let mut f = Field::zeros(&g, Space::Spectral);
        assert_eq!(resolution_indicator(&f), 0.0);
        f.values[0] = c(3.0, 0.0);
        assert_eq!(resolution_indicator(&f), 0.0);
        f.values.iter_mut().for_each(|z| *z = c(0.5, 0.5));
        assert_eq!(resolution_indicator(&f), 1.0);

        let g = Grid::square(3.0, 128).unwrap();
        let gauss = Field::from_real_fn(&g, |x, y| (-(x * x + y * y)).exp());
        let gh = forward_transform(&gauss, &g).unwrap();
        assert!(resolution_indicator(&gh) < 1e-10);
    }

    #[test]
    fn constant_mode_rhs_is_the_reduced_ode() {
        let g = Grid::new(2.0, 1.0, 8, 8).unwrap();
        let a = c(0.7, -0.4);
        for params in [
            ModelParams::nls(),
            ModelParams::nls().with_delta(0.3, -1.0).with_off_axis(1.0, Axes::BOTH).with_sigma(2.0),
        ] {
            let u = Field::from_fn(&g, |_, _| a);
            let uh = forward_transform(&u, &g).unwrap();
            let r = rhs_spectral(&uh, &g, &params).unwrap();
            let expect = I * nonlinearity(a, params.sigma) * g.len() as f64;
            assert!((r.values[0] - expect).norm() < 1e-12 * expect.norm());
            assert!(r.values[1..].iter().all(|z| z.norm() < 1e-11));
        }
    }

    #[test]
    fn linear_flow_is_diagonal_rotation() {
        let g = Grid::new(1.0, 1.0, 8, 8).unwrap();
        let p = ModelParams::nls().with_off_axis(0.5, Axes::X1);
        let u = Field::from_fn(&g, |x, y| c((x).cos() + 0.2 * y.sin(), 0.1 * (2.0 * x).sin()));
        let uh = forward_transform(&u, &g).unwrap();
        let mut ev = RhsEvaluator::new(&g, &p).linear_only();
        let mut out = vec![Complex64::default(); g.len()];
        ev.eval_into(&uh.values, &mut out);
        let lin = crate::spectral::linear_symbol(&g, &p);
        for ((o, u), l) in out.iter().zip(&uh.values).zip(&lin.values) {
            assert!((o - l * u).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_field_rhs_vanishes() {
        let g = Grid::new(1.0, 1.0, 8, 8).unwrap();
        let z = Field::zeros(&g, Space::Spectral);
        let r = rhs_spectral(&z, &g, &ModelParams::nls().with_delta(1.0, 1.0)).unwrap();
        assert!(r.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn dealias_mask_keeps_two_thirds() {
        let g = Grid::new(1.0, 1.0, 16, 16).unwrap();
        let m = dealias_mask(&g);
        let kept = m.iter().filter(|&&x| x == 1.0).count();
        // |m| <= 5 along each axis: 11 of 16 modes
        assert_eq!(kept, 11 * 11);
    }
}
