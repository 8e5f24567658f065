use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two spatial directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }
}

/// Periodic box `[-pi L1, pi L1) x [-pi L2, pi L2)` sampled on `N1 x N2` nodes.
///
/// Node `j` along axis `a` sits at `-pi L_a + j h_a` with `h_a = 2 pi L_a / N_a`,
/// so the origin is node `N_a / 2`. Wavenumbers follow the usual FFT ordering:
/// index `k` carries `m / L_a` with `m = k` for `k < N_a/2` and `m = k - N_a`
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub l1: f64,
    pub l2: f64,
    pub n1: usize,
    pub n2: usize,
}

impl Grid {
    pub fn new(l1: f64, l2: f64, n1: usize, n2: usize) -> Result<Self> {
        let grid = Grid { l1, l2, n1, n2 };
        grid.validate()?;
        Ok(grid)
    }

    /// Square box with the same scale and node count along both axes.
    pub fn square(l: f64, n: usize) -> Result<Self> {
        Self::new(l, l, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, l) in [("L1", self.l1), ("L2", self.l2)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::invalid(name, format!("must be a positive finite number, got {l}")));
            }
        }
        for (name, n) in [("N1", self.n1), ("N2", self.n2)] {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::invalid(name, format!("must be a power of two >= 2, got {n}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn scale(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X1 => self.l1,
            Axis::X2 => self.l2,
        }
    }

    pub fn count(&self, axis: Axis) -> usize {
        match axis {
            Axis::X1 => self.n1,
            Axis::X2 => self.n2,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        2.0 * PI * self.scale(axis) / self.count(axis) as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing(Axis::X1) * self.spacing(Axis::X2)
    }

    pub fn nodes(&self, axis: Axis) -> Vec<f64> {
        // -pi L + j h, written about the centre so that nodes pair up exactly as +-x
        let h = self.spacing(axis);
        let half = (self.count(axis) / 2) as i64;
        (0..self.count(axis) as i64).map(|j| (j - half) as f64 * h).collect()
    }

    /// Signed integer mode numbers in FFT order.
    pub fn mode_numbers(&self, axis: Axis) -> Vec<i64> {
        let n = self.count(axis) as i64;
        (0..n).map(|k| if k < n / 2 { k } else { k - n }).collect()
    }

    pub fn wavenumbers(&self, axis: Axis) -> Vec<f64> {
        let l = self.scale(axis);
        self.mode_numbers(axis).into_iter().map(|m| m as f64 / l).collect()
    }

    /// Flat index of node `(i1, i2)`; the x2 index runs fastest.
    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    /// Flat index of the node at the origin.
    pub fn origin_index(&self) -> usize {
        self.index(self.n1 / 2, self.n2 / 2)
    }

    /// Samples `f(x1, x2)` on every node.
    pub fn sample<T, F: FnMut(f64, f64) -> T>(&self, mut f: F) -> Vec<T> {
        let x1 = self.nodes(Axis::X1);
        let x2 = self.nodes(Axis::X2);
        let mut out = Vec::with_capacity(self.len());
        for &a in &x1 {
            for &b in &x2 {
                out.push(f(a, b));
            }
        }
        out
    }

    /// Same grid with the node count halved along both axes.
    pub fn coarsened(&self) -> Result<Self> {
        Self::new(self.l1, self.l2, self.n1 / 2, self.n2 / 2)
    }
}

impl Default for Grid {
    /// `L = 3`, `N = 256` along both axes.
    fn default() -> Self {
        Grid { l1: 3.0, l2: 3.0, n1: 256, n2: 256 }
    }
}

/// Subset of axes on which the off-axis operator acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Axes {
    pub x1: bool,
    pub x2: bool,
}

impl Axes {
    pub const NONE: Axes = Axes { x1: false, x2: false };
    pub const X1: Axes = Axes { x1: true, x2: false };
    pub const X2: Axes = Axes { x1: false, x2: true };
    pub const BOTH: Axes = Axes { x1: true, x2: true };

    pub fn contains(&self, axis: Axis) -> bool {
        match axis {
            Axis::X1 => self.x1,
            Axis::X2 => self.x2,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.x1 && !self.x2
    }

    pub fn count(&self) -> usize {
        self.x1 as usize + self.x2 as usize
    }

    pub fn to_vec(self) -> Vec<Axis> {
        let mut v = Vec::new();
        if self.x1 {
            v.push(Axis::X1);
        }
        if self.x2 {
            v.push(Axis::X2);
        }
        v
    }
}

impl FromIterator<Axis> for Axes {
    fn from_iter<I: IntoIterator<Item = Axis>>(iter: I) -> Self {
        let mut axes = Axes::NONE;
        for a in iter {
            match a {
                Axis::X1 => axes.x1 = true,
                Axis::X2 => axes.x2 = true,
            }
        }
        axes
    }
}

impl Serialize for Axes {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Axes {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Axis>::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

/// Parameters of the equation family
/// `i P_eps u_t + Lap u + (1 + i delta . grad)(|u|^{2 sigma} u) = 0`
/// with `P_eps = 1 - eps^2 sum_{j in axes} d_j^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub epsilon: f64,
    pub axes: Axes,
    pub delta: [f64; 2],
    pub sigma: f64,
}

impl ModelParams {
    /// Cubic focusing NLS.
    pub fn nls() -> Self {
        ModelParams { epsilon: 0.0, axes: Axes::NONE, delta: [0.0, 0.0], sigma: 1.0 }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_delta(mut self, d1: f64, d2: f64) -> Self {
        self.delta = [d1, d2];
        self
    }

    pub fn with_off_axis(mut self, epsilon: f64, axes: Axes) -> Self {
        self.epsilon = epsilon;
        self.axes = axes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::invalid("epsilon", format!("must be finite and >= 0, got {}", self.epsilon)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be finite and > 0, got {}", self.sigma)));
        }
        if !self.delta.iter().all(|d| d.is_finite()) {
            return Err(Error::invalid("delta", "components must be finite"));
        }
        Ok(())
    }

    /// True when `P_eps` is the identity.
    pub fn is_local(&self) -> bool {
        self.epsilon == 0.0 || self.axes.is_empty()
    }

    pub fn has_steepening(&self) -> bool {
        self.delta != [0.0, 0.0]
    }

    /// `eps^2 sum_{j in axes} xi_j^2`.
    #[inline]
    pub fn off_axis_weight(&self, xi1: f64, xi2: f64) -> f64 {
        if self.is_local() {
            return 0.0;
        }
        let e2 = self.epsilon * self.epsilon;
        let mut s = 0.0;
        if self.axes.x1 {
            s += xi1 * xi1;
        }
        if self.axes.x2 {
            s += xi2 * xi2;
        }
        e2 * s
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::nls()
    }
}
