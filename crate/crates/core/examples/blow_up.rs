//! Cubic NLS with the ground state plus a small Gaussian: the sup norm grows
//! until conservation of the mass is lost and the run stops.

use dnls::evolution::{evolve, IntegratorConfig, Monitors};
use dnls::io::Sign;
use dnls::presets::perturbed_state_data;
use dnls::spectral::{Grid, ModelParams};
use dnls::stationary::{ground_state, NewtonOptions};

fn main() -> dnls::Result<()> {
    let grid = Grid::square(3.0, 256)?;
    let params = ModelParams::nls();
    let q = ground_state(&grid, &NewtonOptions::default())?.q;
    let u0 = perturbed_state_data(&q, &grid, Sign::Plus, 0.1)?;
    let rec = evolve(&u0, &IntegratorConfig::new(2e-3, 3.0), &grid, &params, &Monitors::default(), None)?;
    for s in rec.samples.iter().step_by(50) {
        println!("t = {:.3}: |u|_inf = {:8.3}, drift {:.2e}", s.t, s.linf, s.mass_rel_drift);
    }
    println!("{:?}", rec.status);
    for w in &rec.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
