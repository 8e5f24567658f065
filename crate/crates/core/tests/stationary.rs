use dnls::io::{read_snapshot, write_snapshot, SnapshotMeta};
use dnls::spectral::{Axes, Field, Grid, ModelParams};
use dnls::stationary::{fixed_point_residual, residual_norm, solve_from_ground_state, NewtonOptions, SpectralPair, StationaryProblem};

fn max_parts(q: &Field) -> (f64, f64) {
    q.values.iter().fold((0.0f64, 0.0f64), |(r, i), z| (r.max(z.re.abs()), i.max(z.im.abs())))
}

/// Largest `|Q(i, j) - Q(map(i, j))|` relative to `max |Q|`.
fn asymmetry(q: &Field, g: &Grid, map: impl Fn(usize, usize) -> (usize, usize)) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.n1 {
        for j in 0..g.n2 {
            let (a, b) = map(i, j);
            worst = worst.max((q.get(i, j) - q.get(a, b)).norm());
        }
    }
    worst / q.max_abs()
}

#[test]
fn real_even_state_without_steepening() {
    let g = Grid::square(3.0, 64).unwrap();
    let p = ModelParams::nls().with_sigma(2.0).with_off_axis(0.5, Axes::X1);
    let s = solve_from_ground_state(&g, &p, &NewtonOptions::default()).unwrap();
    let (re, im) = max_parts(&s.q);
    assert!(im <= 1e-8 * re, "im {im:e} re {re:e}");
    let n = g.n1;
    assert!(asymmetry(&s.q, &g, |i, j| ((n - i) % n, (n - j) % n)) <= 1e-8);
}

#[test]
fn full_off_axis_state_is_rotation_invariant() {
    let g = Grid::square(3.0, 64).unwrap();
    let p = ModelParams::nls().with_off_axis(1.0, Axes::BOTH);
    let s = solve_from_ground_state(&g, &p, &NewtonOptions::default()).unwrap();
    let n = g.n1;
    // (x1, x2) -> (-x2, x1)
    assert!(asymmetry(&s.q, &g, |i, j| ((n - j) % n, i)) <= 1e-6);
}

#[test]
fn saved_state_reloads_converged() {
    let g = Grid::square(3.0, 64).unwrap();
    let p = ModelParams::nls().with_delta(0.0, 0.4);
    let opts = NewtonOptions::default();
    let s = solve_from_ground_state(&g, &p, &opts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.snap");
    write_snapshot(&s.q, &SnapshotMeta { grid: g, t: 0.0 }, &path).unwrap();
    let (q, meta) = read_snapshot(&path).unwrap();
    assert_eq!(meta.grid, g);
    let problem = StationaryProblem::new(g, p).unwrap();
    let r = fixed_point_residual(&SpectralPair::from_physical(&q, &g).unwrap(), &problem).unwrap();
    assert!(r.max_abs() < opts.tol, "{}", r.max_abs());
    assert!(residual_norm(&q, &problem).unwrap() < opts.tol);
}
