//! Newton–GMRES solve for the cubic NLS ground state from a `sech^2` guess.

use dnls::spectral::{Grid, ModelParams};
use dnls::stationary::{initial_iterate, newton_solve_with, NewtonOptions, StationaryProblem};

fn main() -> dnls::Result<()> {
    let grid = Grid::square(5.0, 256)?;
    let problem = StationaryProblem::new(grid, ModelParams::nls())?;
    let q0 = initial_iterate(&grid, "sech2")?;
    let state = newton_solve_with(&q0, &problem, &NewtonOptions { tol: 1e-12, ..NewtonOptions::default() })?;
    for (k, r) in state.residual_history.iter().enumerate() {
        println!("iteration {k}: residual {r:.3e}");
    }
    println!("Q(0) = {:.12}", state.q.values[grid.origin_index()].re);
    println!("mass = {:.12}", state.q.sum_sq() * grid.cell_area());
    Ok(())
}
