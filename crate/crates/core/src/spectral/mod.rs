//! Periodic grids, transforms, Fourier symbols and the pseudospectral
//! right-hand side.

mod field;
mod grid;
mod ops;
mod symbols;
mod transform;

pub use field::{Field, Space};
pub use grid::{Axes, Axis, Grid, ModelParams};
pub use ops::{
    apply_nonlinearity, dealias_mask, density_power, krasny_filter, krasny_filter_inplace, nonlinearity,
    resolution_indicator, rhs_spectral, RhsEvaluator,
};
pub(crate) use ops::resolution_indicator_raw;
pub use symbols::{gamma_symbol, laplacian_symbol, linear_symbol, p_symbol, SymbolField, SymbolKind, Tables};
pub(crate) use symbols::gamma_value;
pub use transform::{forward_transform, inverse_transform, Fft2};

/// Quadrature weight turning `sum |u_hat|^2` into the L2 norm squared under
/// the unscaled forward transform: `h1 h2 / (N1 N2)`.
pub fn spectral_weight(grid: &Grid) -> f64 {
    grid.cell_area() / grid.len() as f64
}
