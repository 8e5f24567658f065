//! Closed-form stationary profiles of the one-dimensional model
//!
//! ```text
//! (1 + eps^2) Q'' + (|Q|^{2 sigma} - 1) Q + i delta (|Q|^{2 sigma} Q)' = 0,
//! ```
//!
//! written as `Q = A e^{i theta}`. These serve as exact references for the
//! spectral machinery.

use num_complex::Complex64;

fn k_factor(epsilon: f64, delta: f64) -> f64 {
    (1.0 + delta * delta / (1.0 + epsilon * epsilon)).sqrt()
}

/// Amplitude `A(x) = (2(sigma+1) / (1 + K cosh(2 sigma x / sqrt(1+eps^2))))^{1/(2 sigma)}`
/// with `K = sqrt(1 + delta^2 / (1 + eps^2))`.
pub fn amplitude_1d(x: f64, sigma: f64, epsilon: f64, delta: f64) -> f64 {
    let s = (1.0 + epsilon * epsilon).sqrt();
    let k = k_factor(epsilon, delta);
    let arg = 2.0 * sigma * x / s;
    // cosh overflows for |arg| > ~710; the amplitude is 0 to double precision there
    if arg.abs() > 700.0 {
        return 0.0;
    }
    (2.0 * (sigma + 1.0) / (1.0 + k * arg.cosh())).powf(1.0 / (2.0 * sigma))
}

/// Phase `theta(x) = -sgn(delta) ((2 sigma + 1) / sigma) arctan((sqrt(1+eps^2)/|delta|)(1 + K e^{2 sigma x / sqrt(1+eps^2)}))`,
/// identically zero for `delta = 0`.
///
/// This is the antiderivative of
/// `theta' = -(2 sigma + 1) delta A^{2 sigma} / (2 (1 + eps^2)(sigma + 1))`
/// up to an additive constant.
pub fn phase_1d(x: f64, sigma: f64, epsilon: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let s = (1.0 + epsilon * epsilon).sqrt();
    let k = k_factor(epsilon, delta);
    let e = (2.0 * sigma * x / s).exp();
    let arg = if e.is_finite() { (s / delta.abs()) * (1.0 + k * e) } else { f64::INFINITY };
    -delta.signum() * (2.0 * sigma + 1.0) / sigma * arg.atan()
}

/// Right-hand side of the phase equation, `theta'(x)`.
pub fn phase_derivative_1d(x: f64, sigma: f64, epsilon: f64, delta: f64) -> f64 {
    let a = amplitude_1d(x, sigma, epsilon, delta);
    -(2.0 * sigma + 1.0) * delta * a.powf(2.0 * sigma) / (2.0 * (1.0 + epsilon * epsilon) * (sigma + 1.0))
}

/// `Q(x) = A(x) e^{i theta(x)}`.
pub fn profile_1d(x: f64, sigma: f64, epsilon: f64, delta: f64) -> Complex64 {
    Complex64::from_polar(amplitude_1d(x, sigma, epsilon, delta), phase_1d(x, sigma, epsilon, delta))
}

/// Zero-speed solitary wave of the generalized derivative NLS,
/// `(2(sigma+1) sech(2 sigma x))^{1/(2 sigma)} e^{-i ((2 sigma+1)/sigma) arctan(e^{2 sigma x})}`.
///
/// It is the `delta -> inf` limit of `delta^{1/(2 sigma)} profile_1d(x, sigma, 0, delta)`
/// up to a constant phase.
pub fn derivative_nls_profile(x: f64, sigma: f64) -> Complex64 {
    let arg = 2.0 * sigma * x;
    let amp = if arg.abs() > 700.0 { 0.0 } else { (2.0 * (sigma + 1.0) / arg.cosh()).powf(1.0 / (2.0 * sigma)) };
    let e = arg.exp();
    let theta = -(2.0 * sigma + 1.0) / sigma * if e.is_finite() { e.atan() } else { std::f64::consts::FRAC_PI_2 };
    Complex64::from_polar(amp, theta)
}
