use dnls::evolution::{IntegratorConfig, RunRecord, RunState, RunStatus, Sample, Scheme, Stepper};
use dnls::io::{
    decode_series, decode_snapshot, encode_series, encode_snapshot, parse_config, FrameSpec, InitialSpec, OutputSpec,
    RunConfig, Sign, SnapshotMeta,
};
use dnls::presets::{count_humps, monotone_decreasing, Expectation, Verdict, MONOTONE_SLACK};
use dnls::spectral::{
    forward_transform, gamma_symbol, p_symbol, rhs_spectral, Axes, Axis, Field, Grid, ModelParams, RhsEvaluator, Space,
};
use dnls::evolution::conserved_functional;
use num_complex::Complex64;
use proptest::prelude::*;

fn pow2(lo: u32, hi: u32) -> impl Strategy<Value = usize> {
    (lo..=hi).prop_map(|k| 1usize << k)
}

fn grid() -> impl Strategy<Value = Grid> {
    (0.5f64..4.0, 0.5f64..4.0, pow2(2, 5), pow2(2, 5)).prop_map(|(l1, l2, n1, n2)| Grid::new(l1, l2, n1, n2).unwrap())
}

fn axes() -> impl Strategy<Value = Axes> {
    prop_oneof![Just(Axes::NONE), Just(Axes::X1), Just(Axes::X2), Just(Axes::BOTH)]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.0f64..2.0, axes(), -2.0f64..2.0, -2.0f64..2.0, prop_oneof![Just(1.0), Just(2.0), Just(3.0), 0.5f64..3.0])
        .prop_map(|(e, a, d1, d2, s)| ModelParams::nls().with_sigma(s).with_off_axis(e, a).with_delta(d1, d2))
}

/// A field with pseudo-random smooth-ish values determined by `seed`.
fn field(g: &Grid, seed: u64) -> Field {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    Field::from_fn(g, |x, y| Complex64::new(next() + (-(x * x + y * y)).exp(), next()))
}

fn index_of_negative(g: &Grid, k1: usize, k2: usize) -> usize {
    g.index((g.n1 - k1) % g.n1, (g.n2 - k2) % g.n2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(g in grid(), seed in any::<u64>()) {
        let u = field(&g, seed);
        let physical = u.sum_sq() * g.cell_area();
        let spectral = conserved_functional(&forward_transform(&u, &g).unwrap(), &g, &ModelParams::nls()).unwrap();
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    #[test]
    fn symbol_bounds(g in grid(), p in params()) {
        let pe = p_symbol(&g, &p, 1.0);
        let gamma = gamma_symbol(&g, &p);
        let xi1 = g.wavenumbers(Axis::X1);
        let xi2 = g.wavenumbers(Axis::X2);
        let dn = p.delta[0].hypot(p.delta[1]);
        for k1 in 0..g.n1 {
            for k2 in 0..g.n2 {
                prop_assert!(pe.at(&g, k1, k2).re >= 1.0);
                let bound = 1.0 + dn * xi1[k1].hypot(xi2[k2]);
                prop_assert!(gamma.at(&g, k1, k2).norm() <= bound * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn real_even_data_keeps_conjugate_symmetry(
        l in 1.0f64..4.0, n in pow2(3, 5), p in params(), a in 0.5f64..2.0, b in 0.2f64..2.0,
    ) {
        let g = Grid::square(l, n).unwrap();
        let p = p.with_delta(0.0, 0.0);
        // real and even in both variables, smooth and periodic
        let u = Field::from_real_fn(&g, |x, y| a * (b * ((x / l).cos() + (y / l).cos())).exp());
        let uh = forward_transform(&u, &g).unwrap();
        let r = rhs_spectral(&uh, &g, &p).unwrap();
        let scale = r.max_abs().max(1e-300);
        for k1 in 0..g.n1 {
            for k2 in 0..g.n2 {
                // i * rhs is the transform of a real field
                let w = Complex64::i() * r.values[g.index(k1, k2)];
                let m = Complex64::i() * r.values[index_of_negative(&g, k1, k2)];
                prop_assert!((w - m.conj()).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn no_off_axis_term_is_classical_nls(g in grid(), seed in any::<u64>(), s in 0.5f64..3.0, d1 in -1.0f64..1.0, d2 in -1.0f64..1.0, e in 0.1f64..2.0) {
        let uh = forward_transform(&field(&g, seed), &g).unwrap();
        let classical = ModelParams::nls().with_sigma(s).with_delta(d1, d2);
        let base = rhs_spectral(&uh, &g, &classical).unwrap();
        for p in [classical.with_off_axis(e, Axes::NONE), classical.with_off_axis(0.0, Axes::BOTH)] {
            let r = rhs_spectral(&uh, &g, &p).unwrap();
            prop_assert!(r.values.iter().zip(&base.values).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
        }
    }

    #[test]
    fn linear_if_rk4_step_is_an_isometry(g in grid(), p in params(), seed in any::<u64>(), dt in 1e-4f64..1.0) {
        let cfg = IntegratorConfig::new(dt, 10.0 * dt).with_scheme(Scheme::IfRk4);
        let mut st = Stepper::new(&g, &p, &cfg).unwrap();
        *st.evaluator() = RhsEvaluator::new(&g, &p).linear_only();
        let uh = forward_transform(&field(&g, seed), &g).unwrap();
        let m0 = conserved_functional(&uh, &g, &p).unwrap();
        let mut state = RunState::new(uh);
        for _ in 0..10 {
            st.advance(&mut state).unwrap();
        }
        let m1 = conserved_functional(&state.u_hat, &g, &p).unwrap();
        prop_assert!((m1 - m0).abs() <= 1e-13 * m0);
    }

    #[test]
    fn snapshot_round_trip(g in grid(), seed in any::<u64>(), t in -1e3f64..1e3, spectral in any::<bool>()) {
        let mut f = field(&g, seed);
        f.space = if spectral { Space::Spectral } else { Space::Physical };
        let meta = SnapshotMeta { grid: g, t };
        let bytes = encode_snapshot(&f, &meta).unwrap();
        prop_assert_eq!(bytes.len(), 41 + 16 * g.len());
        let (h, m) = decode_snapshot(&bytes).unwrap();
        prop_assert_eq!(m, meta);
        prop_assert_eq!(encode_snapshot(&h, &m).unwrap(), bytes);
    }

    #[test]
    fn series_round_trip(rows in prop::collection::vec(prop::array::uniform6(any::<f64>().prop_filter("finite", |x| x.is_finite())), 0..20)) {
        let s: Vec<Sample> = rows
            .iter()
            .map(|r| Sample { t: r[0], linf: r[1], mass_rel_drift: r[2], resolution: r[3], v: [r[4], r[5]] })
            .collect();
        let text = encode_series(&s).unwrap();
        let back = decode_series(&text).unwrap();
        prop_assert_eq!(encode_series(&back).unwrap(), text);
        for (a, b) in s.iter().zip(&back) {
            prop_assert_eq!(a.t.to_bits(), b.t.to_bits());
            prop_assert_eq!(a.v[1].to_bits(), b.v[1].to_bits());
        }
    }

    #[test]
    fn config_round_trip(
        g in grid(), p in params(), dt in 1e-6f64..0.1, t_end in 0.1f64..10.0, kind in 0u8..3,
        amp in 0.0f64..5.0, minus in any::<bool>(), frame in axes(), times in prop::collection::vec(0.0f64..10.0, 0..4),
    ) {
        let initial = match kind {
            0 => InitialSpec::Gaussian { amplitude: amp },
            1 => InitialSpec::Perturbed { sign: if minus { Sign::Minus } else { Sign::Plus }, amplitude: amp, state: None },
            _ => InitialSpec::Stationary { state: Some("q.snap".into()) },
        };
        let cfg = RunConfig {
            grid: g,
            model: p,
            integrator: IntegratorConfig::new(dt, t_end),
            initial,
            frame: FrameSpec { axes: frame },
            output: OutputSpec { snapshot_times: times, ..OutputSpec::default() },
            ..RunConfig::default()
        };
        let back = parse_config(&cfg.to_toml().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn monotone_predicate(mut xs in prop::collection::vec(0.0f64..10.0, 2..50), i in any::<prop::sample::Index>()) {
        xs.sort_by(|a, b| b.total_cmp(a));
        prop_assert!(monotone_decreasing(&xs, MONOTONE_SLACK));
        let j = i.index(xs.len() - 1) + 1;
        xs[j] = xs[j - 1] * (1.0 + 1e-6) + 1e-9;
        prop_assert!(!monotone_decreasing(&xs, MONOTONE_SLACK));
    }

    #[test]
    fn hump_count_is_shift_invariant(s1 in 0usize..32, s2 in 0usize..32, cx in -4.0f64..4.0, w in 0.3f64..1.0) {
        let g = Grid::square(3.0, 32).unwrap();
        let f = Field::from_real_fn(&g, |x, y| {
            (-((x - cx).powi(2) + y * y) / w).exp() + 0.8 * (-((x + cx).powi(2) + (y - 2.0).powi(2)) / w).exp()
        });
        let mut rolled = f.clone();
        for i in 0..g.n1 {
            for j in 0..g.n2 {
                rolled.values[g.index((i + s1) % g.n1, (j + s2) % g.n2)] = f.values[g.index(i, j)];
            }
        }
        prop_assert_eq!(count_humps(&f, 0.5), count_humps(&rolled, 0.5));
    }

    #[test]
    fn verdicts_depend_only_on_the_record(linf in prop::collection::vec(0.1f64..5.0, 1..40), stop in prop::option::of(0.0f64..1.0)) {
        let g = Grid::square(1.0, 4).unwrap();
        let rec = RunRecord {
            samples: linf.iter().enumerate().map(|(i, &m)| Sample { t: i as f64 * 0.01, linf: m, mass_rel_drift: 0.0, resolution: 0.0, v: [0.0; 2] }).collect(),
            snapshots: Vec::new(),
            status: stop.map_or(RunStatus::Completed, RunStatus::MassDriftStop),
            warnings: Vec::new(),
            final_state: RunState::new(Field::zeros(&g, Space::Spectral)),
        };
        let ex = [Expectation::MonotoneDecreasing, Expectation::Oscillatory, Expectation::Dispersive, Expectation::FocusThenDecay, Expectation::BlowUp { t: 0.5, rel_tol: 0.05 }];
        let a = Verdict::evaluate(&ex, &rec, false);
        let b = Verdict::evaluate(&ex, &rec.clone(), false);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.checks[4].passed, stop.is_some_and(|t| (t - 0.5).abs() <= 0.025));
    }
}
