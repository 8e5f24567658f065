//! Matrix-free restarted GMRES over any real inner-product space.

use num_complex::Complex64;

use crate::error::Error;

/// Vector operations needed by [`gmres_solve`]. Complex vectors are treated
/// as real vectors of twice the length, `<a, b> = Re sum conj(a) b`.
pub trait KrylovVector: Clone {
    fn dot(&self, other: &Self) -> f64;
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn scale(&mut self, a: f64);
    fn zeros_like(&self) -> Self;

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl KrylovVector for Vec<f64> {
    fn dot(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| a * b).sum()
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }
    fn scale(&mut self, a: f64) {
        self.iter_mut().for_each(|s| *s *= a);
    }
    fn zeros_like(&self) -> Self {
        vec![0.0; self.len()]
    }
}

impl KrylovVector for Vec<Complex64> {
    fn dot(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += v * a;
        }
    }
    fn scale(&mut self, a: f64) {
        self.iter_mut().for_each(|s| *s *= a);
    }
    fn zeros_like(&self) -> Self {
        vec![Complex64::default(); self.len()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Relative tolerance on `||A x - b|| / ||b||`.
    pub tol: f64,
    pub restart: usize,
    /// Cap on the total number of inner iterations (matrix-vector products).
    pub maxiter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-12, restart: 30, maxiter: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct GmresSolution<V> {
    pub x: V,
    pub iterations: usize,
    /// Final relative residual.
    pub residual: f64,
}

/// Failure to reach the tolerance; `best` is the iterate with the smallest
/// residual seen.
#[derive(Debug, Clone)]
pub struct GmresFailure<V> {
    pub best: V,
    pub iterations: usize,
    pub residual: f64,
}

impl<V> From<GmresFailure<V>> for Error {
    fn from(f: GmresFailure<V>) -> Self {
        Error::GmresNoConvergence { iterations: f.iterations, residual: f.residual }
    }
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// Solves `A x = b` starting from `x = 0`.
pub fn gmres_solve<V, F>(mut matvec: F, rhs: &V, opts: &GmresOptions) -> Result<GmresSolution<V>, GmresFailure<V>>
where
    V: KrylovVector,
    F: FnMut(&V) -> V,
{
    let bnorm = rhs.norm();
    let mut x = rhs.zeros_like();
    if bnorm == 0.0 {
        return Ok(GmresSolution { x, iterations: 0, residual: 0.0 });
    }
    let m = opts.restart.max(1);
    let mut total = 0usize;
    // the initial guess is zero, so the first residual is b itself
    let mut r = rhs.clone();

    loop {
        let beta = r.norm();
        if beta / bnorm <= opts.tol {
            return Ok(GmresSolution { x, iterations: total, residual: beta / bnorm });
        }
        if total >= opts.maxiter {
            return Err(GmresFailure { best: x, iterations: total, residual: beta / bnorm });
        }

        let mut basis: Vec<V> = Vec::with_capacity(m + 1);
        let mut v0 = r.clone();
        v0.scale(1.0 / beta);
        basis.push(v0);
        // column-major Hessenberg, h[j][i] for i <= j + 1
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<f64> = Vec::with_capacity(m);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k = 0;

        while k < m && total < opts.maxiter {
            let mut w = matvec(&basis[k]);
            total += 1;
            let mut col = vec![0.0; k + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = w.dot(v);
                col[i] = hij;
                w.axpy(-hij, v);
            }
            let wn = w.norm();
            col[k + 1] = wn;
            for i in 0..k {
                let t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            let (c, s) = givens(col[k], col[k + 1]);
            col[k] = c * col[k] + s * col[k + 1];
            col[k + 1] = 0.0;
            g[k + 1] = -s * g[k];
            g[k] *= c;
            cs.push(c);
            sn.push(s);
            h.push(col);
            k += 1;
            let est = g[k].abs() / bnorm;
            if est <= opts.tol || wn == 0.0 {
                break;
            }
            w.scale(1.0 / wn);
            basis.push(w);
        }

        // back substitution for the k coefficients
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.axpy(*yi, v);
        }

        // true residual for the restart
        r = rhs.clone();
        let ax = matvec(&x);
        r.axpy(-1.0, &ax);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_in_one_iteration() {
        let b = vec![1.0, -2.0, 3.5];
        let sol = gmres_solve(|v: &Vec<f64>| v.clone(), &b, &GmresOptions::default()).unwrap();
        assert_eq!(sol.iterations, 1);
        for (a, e) in sol.x.iter().zip(&b) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_solve() {
        let d = [1.0, 2.0, 4.0];
        let b = vec![3.0, 3.0, 3.0];
        let sol = gmres_solve(|v: &Vec<f64>| v.iter().zip(&d).map(|(a, b)| a * b).collect(), &b, &GmresOptions::default())
            .unwrap();
        assert!(sol.iterations <= 3);
        for i in 0..3 {
            assert!((sol.x[i] - b[i] / d[i]).abs() <= 1e-12 * b[i] / d[i]);
        }
    }

    #[test]
    fn complex_vectors_use_real_inner_product() {
        let b = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)];
        // multiplication by i is real-linear and orthogonal
        let sol = gmres_solve(
            |v: &Vec<Complex64>| v.iter().map(|z| z * Complex64::i()).collect(),
            &b,
            &GmresOptions::default(),
        )
        .unwrap();
        for (x, e) in sol.x.iter().zip(&b) {
            assert!((x * Complex64::i() - e).norm() < 1e-13);
        }
    }

    #[test]
    fn cyclic_shift_stagnates() {
        let n = 20;
        let mut b = vec![0.0; n];
        b[0] = 1.0;
        let shift = |v: &Vec<f64>| {
            let mut out = vec![0.0; v.len()];
            for i in 0..v.len() {
                out[(i + 1) % v.len()] = v[i];
            }
            out
        };
        let err = gmres_solve(shift, &b, &GmresOptions { tol: 1e-10, restart: 5, maxiter: 10 }).unwrap_err();
        assert_eq!(err.iterations, 10);
        assert!(err.residual > 0.5);
        assert_eq!(err.best.len(), n);
        assert!(matches!(Error::from(err), Error::GmresNoConvergence { iterations: 10, .. }));
    }

    #[test]
    fn restarts_reach_tolerance_on_nonnormal_system() {
        let n = 40;
        // upper bidiagonal, well conditioned
        let op = |v: &Vec<f64>| -> Vec<f64> {
            (0..n).map(|i| 2.0 * v[i] + if i + 1 < n { 0.5 * v[i + 1] } else { 0.0 }).collect()
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let sol = gmres_solve(op, &b, &GmresOptions { tol: 1e-12, restart: 8, maxiter: 400 }).unwrap();
        let r: Vec<f64> = op(&sol.x).iter().zip(&b).map(|(a, b)| a - b).collect();
        assert!(r.norm() <= 1e-11 * b.norm());
    }
}
