use num_complex::Complex64;

use crate::spectral::{Axis, Grid, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// `P_eps^s` for the stored power.
    OffAxis,
    /// Fourier multiplier of the stationary fixed point.
    Gamma,
    /// `-|xi|^2`.
    Laplacian,
    /// `L_eps = -i |xi|^2 / P_eps`.
    Linear,
}

/// A Fourier multiplier sampled on the wavenumber lattice (FFT ordering,
/// same flat layout as [`crate::spectral::Field`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolField {
    pub kind: SymbolKind,
    pub values: Vec<Complex64>,
}

impl SymbolField {
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn at(&self, grid: &Grid, k1: usize, k2: usize) -> Complex64 {
        self.values[grid.index(k1, k2)]
    }
}

fn lattice<F: FnMut(f64, f64) -> Complex64>(grid: &Grid, mut f: F) -> Vec<Complex64> {
    let xi1 = grid.wavenumbers(Axis::X1);
    let xi2 = grid.wavenumbers(Axis::X2);
    let mut out = Vec::with_capacity(grid.len());
    for &a in &xi1 {
        for &b in &xi2 {
            out.push(f(a, b));
        }
    }
    out
}

/// Symbol of `P_eps^power`: `(1 + eps^2 sum_{j in axes} xi_j^2)^power`.
pub fn p_symbol(grid: &Grid, params: &ModelParams, power: f64) -> SymbolField {
    let values = lattice(grid, |a, b| Complex64::new(p_value(params, a, b, power), 0.0));
    SymbolField { kind: SymbolKind::OffAxis, values }
}

#[inline]
pub(crate) fn p_value(params: &ModelParams, xi1: f64, xi2: f64, power: f64) -> f64 {
    if params.is_local() {
        return 1.0;
    }
    let base = 1.0 + params.off_axis_weight(xi1, xi2);
    if power == 1.0 {
        base
    } else if power == -1.0 {
        1.0 / base
    } else {
        base.powf(power)
    }
}

/// `(1 - delta . xi) / (1 + |xi|^2 + eps^2 sum_{j in axes} xi_j^2)`.
pub fn gamma_symbol(grid: &Grid, params: &ModelParams) -> SymbolField {
    let values = lattice(grid, |a, b| Complex64::new(gamma_value(params, a, b), 0.0));
    SymbolField { kind: SymbolKind::Gamma, values }
}

#[inline]
pub(crate) fn gamma_value(params: &ModelParams, xi1: f64, xi2: f64) -> f64 {
    let num = 1.0 - params.delta[0] * xi1 - params.delta[1] * xi2;
    let den = 1.0 + xi1 * xi1 + xi2 * xi2 + params.off_axis_weight(xi1, xi2);
    num / den
}

pub fn laplacian_symbol(grid: &Grid) -> SymbolField {
    let values = lattice(grid, |a, b| Complex64::new(-(a * a + b * b), 0.0));
    SymbolField { kind: SymbolKind::Laplacian, values }
}

/// Diagonal linear part of the evolution, `-i |xi|^2 / P_eps(xi)`.
pub fn linear_symbol(grid: &Grid, params: &ModelParams) -> SymbolField {
    let values = lattice(grid, |a, b| Complex64::new(0.0, -(a * a + b * b) * p_value(params, a, b, -1.0)));
    SymbolField { kind: SymbolKind::Linear, values }
}

/// Real-valued tables used by the evolution and solver kernels.
#[derive(Debug, Clone)]
pub struct Tables {
    pub xi1: Vec<f64>,
    pub xi2: Vec<f64>,
    /// `P_eps(xi)`.
    pub p: Vec<f64>,
    /// `|xi|^2 / P_eps(xi)`; the linear symbol is `-i` times this.
    pub dispersion: Vec<f64>,
    /// `(1 - delta . xi) / P_eps(xi)`; the nonlinear term is `i` times this times `DFT(g(u))`.
    pub forcing: Vec<f64>,
}

impl Tables {
    pub fn new(grid: &Grid, params: &ModelParams) -> Self {
        let xi1 = grid.wavenumbers(Axis::X1);
        let xi2 = grid.wavenumbers(Axis::X2);
        let n = grid.len();
        let mut p = Vec::with_capacity(n);
        let mut dispersion = Vec::with_capacity(n);
        let mut forcing = Vec::with_capacity(n);
        for &a in &xi1 {
            for &b in &xi2 {
                let pv = p_value(params, a, b, 1.0);
                let pinv = p_value(params, a, b, -1.0);
                p.push(pv);
                dispersion.push((a * a + b * b) * pinv);
                forcing.push((1.0 - params.delta[0] * a - params.delta[1] * b) * pinv);
            }
        }
        Tables { xi1, xi2, p, dispersion, forcing }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Axes;

    fn unit_grid() -> Grid {
        Grid::new(1.0, 1.0, 16, 16).unwrap()
    }

    fn idx(g: &Grid, m1: i64, m2: i64) -> usize {
        let k = |m: i64, n: usize| if m >= 0 { m as usize } else { (n as i64 + m) as usize };
        g.index(k(m1, g.n1), k(m2, g.n2))
    }

    #[test]
    fn p_symbol_examples() {
        let g = unit_grid();
        let full = ModelParams::nls().with_off_axis(1.0, Axes::BOTH);
        let s = p_symbol(&g, &full, 1.0);
        assert_eq!(s.values[idx(&g, 0, 0)].re, 1.0);
        assert_eq!(s.values[idx(&g, 1, 1)].re, 3.0);
        let partial = ModelParams::nls().with_off_axis(1.0, Axes::X1);
        let s = p_symbol(&g, &partial, -1.0);
        assert_eq!(s.values[idx(&g, 0, 7)].re, 1.0);
        assert!(s.values.iter().all(|z| z.im == 0.0));
        let s = p_symbol(&g, &full, 1.0);
        assert!(s.values.iter().all(|z| z.re >= 1.0));
    }

    #[test]
    fn gamma_symbol_examples() {
        let g = unit_grid();
        let s = gamma_symbol(&g, &ModelParams::nls());
        assert_eq!(s.values[idx(&g, 0, 0)].re, 1.0);
        let s = gamma_symbol(&g, &ModelParams::nls().with_delta(0.0, 1.0));
        assert_eq!(s.values[idx(&g, 0, 1)].re, 0.0);
        let s = gamma_symbol(&g, &ModelParams::nls().with_off_axis(1.0, Axes::BOTH));
        assert!((s.values[idx(&g, 1, 0)].re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn linear_symbol_is_imaginary_nonpositive() {
        let g = unit_grid();
        let s = linear_symbol(&g, &ModelParams::nls().with_off_axis(0.5, Axes::X2));
        assert!(s.values.iter().all(|z| z.re == 0.0 && z.im <= 0.0));
    }

    #[test]
    fn local_model_gives_identical_tables() {
        let g = unit_grid();
        let a = Tables::new(&g, &ModelParams::nls());
        let b = Tables::new(&g, &ModelParams::nls().with_off_axis(0.7, Axes::NONE));
        let c = Tables::new(&g, &ModelParams::nls().with_off_axis(0.0, Axes::BOTH));
        assert_eq!(a.dispersion, b.dispersion);
        assert_eq!(a.dispersion, c.dispersion);
        assert_eq!(a.forcing, c.forcing);
        assert!(a.p.iter().all(|&p| p == 1.0));
    }
}
