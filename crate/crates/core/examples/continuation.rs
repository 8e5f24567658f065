//! Follows the stationary state from the cubic NLS to self-steepening
//! `delta = (0, 1)` in steps of 0.2.

use dnls::spectral::{Grid, ModelParams};
use dnls::stationary::{continuation_solve_with, ground_state, ContinuationSchedule, NewtonOptions};

fn main() -> dnls::Result<()> {
    let grid = Grid::square(3.0, 128)?;
    let opts = NewtonOptions::default();
    let seed = ground_state(&grid, &opts)?;
    let target = ModelParams::nls().with_delta(0.0, 1.0);
    let state = continuation_solve_with(&ContinuationSchedule::new(vec![target]).with_step(0.2), &seed, &opts)?;
    for (p, r) in &state.continuation_path {
        println!("delta2 = {:.2}: residual {r:.2e}", p.delta[1]);
    }
    let re = state.q.values.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let im = state.q.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    println!("max |Re Q| = {re:.4}, max |Im Q| = {im:.4}");
    Ok(())
}
