//! Pseudospectral toolkit for the two-dimensional nonlinear Schrödinger
//! equation with off-axis dispersion and self-steepening,
//!
//! ```text
//! i P_eps u_t + Lap u + (1 + i delta . grad)(|u|^{2 sigma} u) = 0,
//! P_eps = 1 - eps^2 sum_{j in axes} d_j^2,
//! ```
//!
//! on a periodic box. The crate computes stationary states `u = e^{it} Q`
//! by Newton–GMRES with parameter continuation, integrates the evolution
//! with a composite explicit/diagonally-implicit Runge–Kutta scheme (or an
//! integrating-factor RK4), monitors the conserved functional
//! `M_eps = ||P_eps^{1/2} u||^2`, and packages the classical stability and
//! blow-up experiments as named presets.

pub mod error;
pub mod spectral;
pub mod stationary;
pub mod evolution;
pub mod io;
pub mod presets;
pub mod cli;

pub use error::{Error, Result};
