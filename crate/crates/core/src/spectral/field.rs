use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Whether a field holds node values or DFT coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Physical,
    Spectral,
}

impl Space {
    pub fn tag(self) -> u8 {
        match self {
            Space::Physical => 0,
            Space::Spectral => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Space::Physical),
            1 => Some(Space::Spectral),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Space::Physical => "physical",
            Space::Spectral => "spectral",
        }
    }
}

/// Complex lattice function on an `N1 x N2` grid, stored row-major with the
/// x2 index running fastest (`values[i1 * N2 + i2]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<Complex64>,
    pub n1: usize,
    pub n2: usize,
    pub space: Space,
}

impl Field {
    pub fn zeros(grid: &Grid, space: Space) -> Self {
        Field { values: vec![Complex64::new(0.0, 0.0); grid.len()], n1: grid.n1, n2: grid.n2, space }
    }

    pub fn from_values(grid: &Grid, values: Vec<Complex64>, space: Space) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape { expected: grid.shape(), got: (values.len(), 1) });
        }
        Ok(Field { values, n1: grid.n1, n2: grid.n2, space })
    }

    /// Samples a complex function of `(x1, x2)` on the grid nodes.
    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(grid: &Grid, f: F) -> Self {
        Field { values: grid.sample(f), n1: grid.n1, n2: grid.n2, space: Space::Physical }
    }

    pub fn from_real_fn<F: FnMut(f64, f64) -> f64>(grid: &Grid, mut f: F) -> Self {
        Self::from_fn(grid, |a, b| Complex64::new(f(a, b), 0.0))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn check(&self, grid: &Grid, space: Space) -> Result<()> {
        if self.shape() != grid.shape() || self.values.len() != grid.len() {
            return Err(Error::Shape { expected: grid.shape(), got: self.shape() });
        }
        if self.space != space {
            return Err(Error::Space { expected: space.name() });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Plain sum of squared moduli, without any quadrature weight.
    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn get(&self, i1: usize, i2: usize) -> Complex64 {
        self.values[i1 * self.n2 + i2]
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: Complex64) {
        for z in &mut self.values {
            *z *= s;
        }
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }
}
