//! Evolves a ground state to `t = 1`; the solution should stay on the orbit
//! `e^{it} Q` and conserve the off-axis mass.

use dnls::evolution::{evolve, IntegratorConfig, Monitors};
use dnls::spectral::{inverse_transform, Grid, ModelParams};
use dnls::stationary::{ground_state, NewtonOptions};
use num_complex::Complex64;

fn main() -> dnls::Result<()> {
    let grid = Grid::square(3.0, 128)?;
    let params = ModelParams::nls();
    let q = ground_state(&grid, &NewtonOptions::default())?.q;
    let rec = evolve(&q, &IntegratorConfig::new(1e-3, 1.0), &grid, &params, &Monitors { sample_every: 100, ..Monitors::default() }, None)?;
    for s in &rec.samples {
        println!("t = {:.1}: |u|_inf = {:.12}, drift {:.2e}", s.t, s.linf, s.mass_rel_drift);
    }
    let u = inverse_transform(&rec.final_state.u_hat, &grid)?;
    let rot = Complex64::from_polar(1.0, rec.final_state.t);
    let err = u.values.iter().zip(&q.values).map(|(a, b)| (a - b * rot).norm()).fold(0.0, f64::max);
    println!("{:?}; max |u - e^{{it}} Q| = {err:.2e}", rec.status);
    Ok(())
}
