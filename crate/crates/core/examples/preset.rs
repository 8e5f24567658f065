//! Runs a catalog experiment and prints its verdict.
//!
//! cargo run --release --example preset -- partial_sigma2_plus reduced

use dnls::presets::{catalog, run_preset, StateCache};

fn main() -> dnls::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(name) = args.next() else {
        for p in catalog() {
            println!("{:<34} {}", p.name, p.reference);
        }
        return Ok(());
    };
    let reduced = args.next().as_deref() == Some("reduced");
    let outcome = run_preset(&name, reduced, &StateCache::from_env())?;
    for c in &outcome.verdict.checks {
        println!("{} {:?}: {}", if c.passed { "pass" } else { "fail" }, c.expectation, c.detail);
    }
    println!("verdict: {}", outcome.verdict.label());
    Ok(())
}
