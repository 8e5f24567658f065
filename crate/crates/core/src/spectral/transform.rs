use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::spectral::{Field, Grid, Space};

struct Buffers {
    transposed: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// 2D DFT on a fixed grid shape.
///
/// Forward is unscaled, `u_hat[k] = sum_j u[j] exp(-2 pi i j.k / N)`; the
/// inverse carries the `1 / (N1 N2)` factor, so Parseval reads
/// `sum |u|^2 = sum |u_hat|^2 / (N1 N2)`.
///
/// Plans are shared and buffers are pooled, so one instance can be used from
/// several threads on distinct data.
pub struct Fft2 {
    n1: usize,
    n2: usize,
    fwd1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
    pool: Mutex<Vec<Buffers>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("n1", &self.n1).field("n2", &self.n2).finish()
    }
}

impl Fft2 {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            n1: grid.n1,
            n2: grid.n2,
            fwd1: planner.plan_fft_forward(grid.n1),
            fwd2: planner.plan_fft_forward(grid.n2),
            inv1: planner.plan_fft_inverse(grid.n1),
            inv2: planner.plan_fft_inverse(grid.n2),
            pool: Mutex::new(Vec::new()),
        }
    }

    fn take_buffers(&self) -> Buffers {
        if let Ok(mut pool) = self.pool.try_lock() {
            if let Some(b) = pool.pop() {
                return b;
            }
        }
        let scratch_len = [&self.fwd1, &self.fwd2, &self.inv1, &self.inv2]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Buffers {
            transposed: vec![Complex64::default(); self.n1 * self.n2],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    fn give_back(&self, b: Buffers) {
        if let Ok(mut pool) = self.pool.lock() {
            pool.push(b);
        }
    }

    fn run(&self, data: &mut [Complex64], along2: &Arc<dyn Fft<f64>>, along1: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.n1 * self.n2, "buffer does not match the transform shape");
        let mut b = self.take_buffers();
        along2.process_with_scratch(data, &mut b.scratch);
        transpose::transpose(data, &mut b.transposed, self.n2, self.n1);
        along1.process_with_scratch(&mut b.transposed, &mut b.scratch);
        transpose::transpose(&b.transposed, data, self.n1, self.n2);
        self.give_back(b);
    }

    /// Unscaled forward transform of a raw buffer, in place.
    pub fn forward_inplace(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd2, &self.fwd1);
    }

    /// Inverse transform including the `1 / (N1 N2)` factor, in place.
    pub fn inverse_inplace(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv2, &self.inv1);
        let s = 1.0 / (self.n1 * self.n2) as f64;
        for z in data.iter_mut() {
            *z *= s;
        }
    }

    pub fn forward(&self, f: &Field) -> Result<Field> {
        let grid = Grid { l1: 1.0, l2: 1.0, n1: self.n1, n2: self.n2 };
        f.check(&grid, Space::Physical)?;
        let mut out = f.clone();
        self.forward_inplace(&mut out.values);
        out.space = Space::Spectral;
        Ok(out)
    }

    pub fn inverse(&self, f: &Field) -> Result<Field> {
        let grid = Grid { l1: 1.0, l2: 1.0, n1: self.n1, n2: self.n2 };
        f.check(&grid, Space::Spectral)?;
        let mut out = f.clone();
        self.inverse_inplace(&mut out.values);
        out.space = Space::Physical;
        Ok(out)
    }
}

/// Forward transform with a one-off plan.
pub fn forward_transform(f: &Field, grid: &Grid) -> Result<Field> {
    f.check(grid, Space::Physical)?;
    Fft2::new(grid).forward(f)
}

/// Inverse transform with a one-off plan.
pub fn inverse_transform(f: &Field, grid: &Grid) -> Result<Field> {
    f.check(grid, Space::Spectral)?;
    Fft2::new(grid).inverse(f)
}
