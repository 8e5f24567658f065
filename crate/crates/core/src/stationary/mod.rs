//! Stationary states `u = e^{it} Q`: closed-form 1D profiles and the 2D
//! Newton–GMRES solver with parameter continuation.

mod continuation;
pub mod explicit;
mod gmres;
mod solver;

pub use continuation::{continuation_solve, continuation_solve_with, ground_state, solve_from_ground_state, ContinuationSchedule};
pub use explicit::{amplitude_1d, derivative_nls_profile, phase_1d, phase_derivative_1d, profile_1d};
pub use gmres::{gmres_solve, GmresFailure, GmresOptions, GmresSolution, KrylovVector};
pub use solver::{
    fixed_point_residual, initial_iterate, jacobian_vector_product, newton_solve, newton_solve_with, residual_norm,
    NewtonOptions, SpectralPair, StationaryProblem, StationaryState, ZERO_THRESHOLD,
};
