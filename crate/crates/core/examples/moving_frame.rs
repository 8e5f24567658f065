//! A boosted Gaussian for the derivative NLS, followed in a frame that keeps
//! the density maximum at the origin.

use dnls::evolution::{evolve, IntegratorConfig, Monitors};
use dnls::spectral::{Axes, Field, Grid, ModelParams};
use num_complex::Complex64;

fn main() -> dnls::Result<()> {
    let grid = Grid::square(3.0, 128)?;
    let params = ModelParams::nls().with_delta(0.0, 0.5);
    let k = 2.0 / 3.0;
    let u0 = Field::from_fn(&grid, |x, y| Complex64::from_polar(1.2 * (-(x * x + y * y)).exp(), k * y));
    let rec = evolve(&u0, &IntegratorConfig::new(5e-3, 1.0), &grid, &params, &Monitors { sample_every: 20, ..Monitors::default() }, Some(Axes::BOTH))?;
    for s in &rec.samples {
        println!("t = {:.2}: v = ({:+.4}, {:+.4}), |u|_inf = {:.4}", s.t, s.v[0], s.v[1], s.linf);
    }
    let f = rec.final_state.frame.expect("frame");
    println!("{:?}; shift y = ({:+.4}, {:+.4})", rec.status, f.y[0], f.y[1]);
    Ok(())
}
