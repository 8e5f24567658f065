//! Tabulates the closed-form 1D stationary profile `Q = A e^{i theta}`.
//!
//! cargo run --example explicit_profile -- 2 0.5 1

use dnls::stationary::{amplitude_1d, phase_1d, profile_1d};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (sigma, eps, delta) = match args[..] {
        [s, e, d] => (s, e, d),
        _ => (1.0, 0.0, 1.0),
    };
    println!("sigma = {sigma}, eps = {eps}, delta = {delta}");
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "x", "A", "theta", "Re Q", "Im Q");
    for i in -8..=8 {
        let x = i as f64 * 0.5;
        let q = profile_1d(x, sigma, eps, delta);
        println!(
            "{x:>6.2} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            amplitude_1d(x, sigma, eps, delta),
            phase_1d(x, sigma, eps, delta),
            q.re,
            q.im
        );
    }
}
