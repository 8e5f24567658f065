//! Fast self-checks behind `dnls verify`.

use num_complex::Complex64;

use crate::evolution::{evolve, IntegratorConfig, Monitors, RunStatus};
use crate::io::{decode_series, decode_snapshot, encode_series, encode_snapshot, SnapshotMeta};
use crate::spectral::{forward_transform, inverse_transform, Field, Grid, ModelParams, Space};
use crate::stationary::{amplitude_1d, ground_state, phase_1d, phase_derivative_1d, residual_norm, NewtonOptions, StationaryProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> VerifyCheck {
    VerifyCheck { name, passed, detail }
}

fn explicit_profile() -> VerifyCheck {
    let peak = amplitude_1d(0.0, 1.0, 0.0, 0.0);
    let mut worst = 0.0f64;
    for &(s, e, d) in &[(1.0, 0.0, 1.0), (2.0, 0.5, 1.0), (3.0, 1.0, -1.0)] {
        for i in -20..=20 {
            let x = i as f64 * 0.25;
            let h = 1e-4;
            let fd = (phase_1d(x + h, s, e, d) - phase_1d(x - h, s, e, d)) / (2.0 * h);
            worst = worst.max((fd - phase_derivative_1d(x, s, e, d)).abs());
        }
    }
    let ok = (peak - 2f64.sqrt()).abs() < 1e-15 && worst < 1e-7;
    check("explicit_profile", ok, format!("A(0) = {peak}, phase derivative error {worst:.1e}"))
}

fn transform_round_trip() -> VerifyCheck {
    let g = Grid::new(3.0, 2.0, 64, 32).unwrap();
    let f = Field::from_fn(&g, |x, y| Complex64::new((x * 0.7).sin() + y.cos(), x * y * 0.01));
    let back = forward_transform(&f, &g).and_then(|h| inverse_transform(&h, &g));
    match back {
        Ok(b) => {
            let e = b.max_abs_diff(&f);
            check("transform_round_trip", e < 1e-13, format!("max error {e:.1e}"))
        }
        Err(e) => check("transform_round_trip", false, e.to_string()),
    }
}

fn ground_state_and_orbit() -> Vec<VerifyCheck> {
    let g = Grid::square(3.0, 128).unwrap();
    let q = match ground_state(&g, &NewtonOptions::default()) {
        Ok(s) => s,
        Err(e) => return vec![check("newton_ground_state", false, e.to_string())],
    };
    let problem = StationaryProblem::new(g, ModelParams::nls()).unwrap();
    let res = residual_norm(&q.q, &problem).unwrap_or(f64::INFINITY);
    let mut out = vec![check(
        "newton_ground_state",
        res < 1e-10,
        format!("residual {res:.1e} after {} iterations", q.iterations),
    )];
    let cfg = IntegratorConfig::new(1e-2, 0.5);
    let run = |cfg: &IntegratorConfig| evolve(&q.q, cfg, &g, &ModelParams::nls(), &Monitors::default(), None);
    match (run(&cfg), run(&cfg)) {
        (Ok(a), Ok(b)) => {
            let rot = Complex64::from_polar(1.0, a.final_state.t);
            let exact = Field { values: q.q.values.iter().map(|z| z * rot).collect(), ..q.q.clone() };
            let err = inverse_transform(&a.final_state.u_hat, &g).map_or(f64::INFINITY, |u| u.max_abs_diff(&exact));
            let drift = a.max_mass_drift();
            out.push(check(
                "orbit",
                a.status == RunStatus::Completed && err < 1e-6 && drift < 1e-10,
                format!("{:?}, error {err:.1e}, drift {drift:.1e}", a.status),
            ));
            out.push(check("determinism", a == b, "two identical runs compared bitwise".into()));
        }
        (Err(e), _) | (_, Err(e)) => out.push(check("orbit", false, e.to_string())),
    }
    out
}

fn format_round_trips() -> VerifyCheck {
    let g = Grid::new(1.5, 1.0, 8, 4).unwrap();
    let f = Field { space: Space::Spectral, ..Field::from_fn(&g, |x, y| Complex64::new(x / 3.0, y.exp())) };
    let meta = SnapshotMeta { grid: g, t: 0.1 };
    let snap_ok = encode_snapshot(&f, &meta)
        .and_then(|b| decode_snapshot(&b))
        .map(|(h, m)| m == meta && h.space == f.space && h.values.iter().zip(&f.values).all(|(a, b)| {
            a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
        }))
        .unwrap_or(false);
    let samples = vec![crate::evolution::Sample { t: 0.1, linf: 1.0 / 3.0, mass_rel_drift: 1e-17, resolution: 2e-9, v: [0.0, 0.3] }];
    let series_ok = encode_series(&samples)
        .and_then(|s| decode_series(&s))
        .map(|back| back == samples)
        .unwrap_or(false);
    check("format_round_trips", snap_ok && series_ok, format!("snapshot {snap_ok}, series {series_ok}"))
}

/// Runs every check; takes a few seconds.
pub fn verify_suite() -> Vec<VerifyCheck> {
    let mut out = vec![explicit_profile(), transform_round_trip(), format_round_trips()];
    out.extend(ground_state_and_orbit());
    out
}
