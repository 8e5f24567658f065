use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::evolution::IntegratorConfig;
use crate::io::{FrameSpec, InitialSpec, OutputSpec, RunConfig, Sign, StationarySpec};
use crate::spectral::{Axes, Grid, ModelParams};

use super::verdict::Expectation;

/// One catalog entry. The full-resolution configuration is stored; the
/// reduced variant halves the node counts and uses `reduced_dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    /// What the experiment shows, in words.
    pub reference: &'static str,
    pub grid: Grid,
    pub params: ModelParams,
    pub integrator: IntegratorConfig,
    pub initial: InitialSpec,
    pub frame: Option<Axes>,
    pub snapshot_times: Vec<f64>,
    /// Time between recorded samples; 0 records every step.
    pub sample_dt: f64,
    pub reduced_dt: f64,
    pub expectations: Vec<Expectation>,
}

const L: f64 = 3.0;
const N: usize = 1024;

fn square(l: f64, n: usize) -> Grid {
    Grid { l1: l, l2: l, n1: n, n2: n }
}

fn perturbed(sign: Sign) -> InitialSpec {
    InitialSpec::Perturbed { sign, amplitude: 0.1, state: None }
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn blow_up(t: f64) -> Vec<Expectation> {
    vec![Expectation::BlowUp { t, rel_tol: 0.05 }]
}

impl Preset {
    fn new(name: impl Into<String>, reference: &'static str, params: ModelParams, initial: InitialSpec) -> Self {
        Preset {
            name: name.into(),
            reference,
            grid: square(L, N),
            params,
            integrator: IntegratorConfig::new(1e-2, 10.0),
            initial,
            frame: None,
            snapshot_times: Vec::new(),
            sample_dt: 1e-2,
            reduced_dt: 1e-2,
            expectations: Vec::new(),
        }
    }

    fn time(mut self, dt: f64, t_end: f64, reduced_dt: f64) -> Self {
        self.integrator.dt = dt;
        self.integrator.t_end = t_end;
        self.reduced_dt = reduced_dt;
        self
    }

    fn grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    fn every_step(mut self) -> Self {
        self.sample_dt = 0.0;
        self
    }

    fn expect(mut self, e: Vec<Expectation>) -> Self {
        self.expectations = e;
        self
    }

    fn sample_every(&self, dt: f64) -> usize {
        ((self.sample_dt / dt).round() as usize).max(1)
    }

    /// The run configuration, full or at halved resolution.
    pub fn config(&self, reduced: bool) -> Result<RunConfig> {
        let (grid, dt) = if reduced { (self.grid.coarsened()?, self.reduced_dt) } else { (self.grid, self.integrator.dt) };
        let suffix = if reduced { "_reduced" } else { "" };
        Ok(RunConfig {
            preset: Some(self.name.clone()),
            reduced,
            grid,
            model: self.params,
            integrator: IntegratorConfig { dt, ..self.integrator },
            initial: self.initial.clone(),
            frame: FrameSpec { axes: self.frame.unwrap_or(Axes::NONE) },
            output: OutputSpec {
                dir: PathBuf::from("out").join(format!("{}{suffix}", self.name)),
                snapshot_times: self.snapshot_times.clone(),
                sample_every: self.sample_every(dt),
                ..OutputSpec::default()
            },
            stationary: StationarySpec::default(),
        })
    }
}

/// Every preset, in a fixed order.
pub fn catalog() -> Vec<Preset> {
    use Expectation::*;
    let nls = ModelParams::nls();
    let mut out = vec![
        Preset::new(
            "nls_minus",
            "Cubic NLS ground state minus a small Gaussian: purely dispersive, the sup norm decreases monotonically.",
            nls,
            perturbed(Sign::Minus),
        )
        .time(1e-3, 5.0, 2e-3)
        .expect(vec![MonotoneDecreasing]),
        Preset::new(
            "nls_plus",
            "Cubic NLS ground state plus a small Gaussian: finite-time blow-up, the run stops at t = 1.89.",
            nls,
            perturbed(Sign::Plus),
        )
        .time(4e-4, 2.0, 8e-4)
        .every_step()
        .expect(blow_up(1.89)),
        {
            let mut p = Preset::new(
                "dnls_pert",
                "Cubic derivative NLS, delta = (0, 1), perturbed stationary state: no sign of blow-up up to t = 5; \
                 the frame velocity v2 slowly approaches 2.",
                nls.with_delta(0.0, 1.0),
                perturbed(Sign::Plus),
            )
            .time(5e-5, 5.0, 1e-3)
            .expect(vec![ReachesEnd, FinalVelocity { component: 1, value: 2.0, tol: 0.5 }]);
            p.integrator.krasny_tau = 1e-10;
            p.frame = Some(Axes::X2);
            p
        },
        Preset::new(
            "dnls_gauss",
            "Cubic derivative NLS, delta = (0, 1), Gaussian 4 exp(-|x|^2) on the 4 pi box: blow-up, \
             mass conservation lost at t = 0.1955.",
            nls.with_delta(0.0, 1.0),
            InitialSpec::Gaussian { amplitude: 4.0 },
        )
        .grid(square(2.0, N))
        .time(2.5e-6, 0.25, 1e-4)
        .every_step()
        .expect(blow_up(0.1955)),
    ];

    // full off-axis variation, no self-steepening
    let full = |sigma: f64| nls.with_sigma(sigma).with_off_axis(1.0, Axes::BOTH);
    for (sigma, plus, minus, text) in [
        (1.0, Dispersive, Dispersive, "Full off-axis dispersion, sigma = 1: both perturbations disperse with an annular profile."),
        (2.0, Oscillatory, Oscillatory, "Full off-axis dispersion, sigma = 2: the sup norm oscillates for both perturbations."),
        (
            3.0,
            Oscillatory,
            MonotoneDecreasing,
            "Full off-axis dispersion, sigma = 3: oscillations for the + perturbation, monotone decay for the - one.",
        ),
    ] {
        for (sign, e) in [(Sign::Plus, plus), (Sign::Minus, minus)] {
            let name = format!("full_offaxis_sigma{}_{}", sigma as u32, sign_name(sign));
            out.push(Preset::new(name, text, full(sigma), perturbed(sign)).expect(vec![e]));
        }
    }

    // full off-axis variation with self-steepening
    for (sigma, d2, plus, minus, text) in [
        (
            1.0,
            1.0,
            Oscillatory,
            Oscillatory,
            "Full off-axis dispersion with self-steepening delta = (0, 1), sigma = 1: the state looks stable, \
             the sup norm oscillates for both perturbations.",
        ),
        (
            2.0,
            0.1,
            Oscillatory,
            Dispersive,
            "Full off-axis dispersion with self-steepening delta = (0, 0.1), sigma = 2: oscillations for +, \
             non-monotone decay for -.",
        ),
        (
            3.0,
            0.1,
            Oscillatory,
            Dispersive,
            "Full off-axis dispersion with self-steepening delta = (0, 0.1), sigma = 3: oscillations for +, decay for -.",
        ),
    ] {
        for (sign, e) in [(Sign::Plus, plus), (Sign::Minus, minus)] {
            let name = format!("full_offaxis_steep_sigma{}_{}", sigma as u32, sign_name(sign));
            out.push(Preset::new(name, text, full(sigma).with_delta(0.0, d2), perturbed(sign)).expect(vec![e]));
        }
    }

    // partial off-axis variation along x1
    let partial = |sigma: f64| nls.with_sigma(sigma).with_off_axis(1.0, Axes::X1);
    let mut p = Preset::new(
        "partial_sigma1_plus",
        "Partial off-axis dispersion along x1, sigma = 1, + perturbation: monotone dispersive decay; \
         at t = 2.5 the hump has split and radial symmetry is lost.",
        partial(1.0),
        perturbed(Sign::Plus),
    )
    .time(1e-2, 5.0, 1e-2)
    .expect(vec![MonotoneDecreasing, Humps { t: 2.5, min: 2 }]);
    p.snapshot_times = vec![2.5];
    out.push(p);
    out.push(
        Preset::new(
            "partial_sigma1_minus",
            "Partial off-axis dispersion along x1, sigma = 1, - perturbation: monotone dispersive decay.",
            partial(1.0),
            perturbed(Sign::Minus),
        )
        .time(1e-2, 5.0, 1e-2)
        .expect(vec![MonotoneDecreasing]),
    );
    out.push(
        Preset::new(
            "partial_sigma2_plus",
            "Partial off-axis dispersion along x1, sigma = 2, + perturbation: blow-up at t = 0.64, \
             compressed along x2.",
            partial(2.0),
            perturbed(Sign::Plus),
        )
        .time(1e-2, 1.0, 1e-2)
        .every_step()
        .expect(blow_up(0.64)),
    );
    out.push(
        Preset::new(
            "partial_sigma2_minus",
            "Partial off-axis dispersion along x1, sigma = 2, - perturbation: the sup norm decreases.",
            partial(2.0),
            perturbed(Sign::Minus),
        )
        .time(1e-2, 5.0, 1e-2)
        .expect(vec![Dispersive]),
    );

    // self-steepening parallel to the off-axis direction
    for (sign, e, text) in [
        (Sign::Minus, MonotoneDecreasing, "Partial off-axis dispersion with parallel self-steepening delta = (0.3, 0), sigma = 2, - perturbation: monotone decay."),
        (
            Sign::Plus,
            Dispersive,
            "Partial off-axis dispersion with parallel self-steepening delta = (0.3, 0), sigma = 2, + perturbation: \
             non-monotone decay to zero.",
        ),
    ] {
        out.push(
            Preset::new(format!("partial_parallel_sigma2_{}", sign_name(sign)), text, partial(2.0).with_delta(0.3, 0.0), perturbed(sign))
                .time(1e-2, 5.0, 1e-2)
                .expect(vec![e]),
        );
    }
    out.push(
        Preset::new(
            "partial_parallel_sigma3_plus",
            "Partial off-axis dispersion with parallel self-steepening delta = (0.1, 0), sigma = 3, + perturbation: \
             blow-up at t = 0.1555 on a 1024 x 2048 grid.",
            partial(3.0).with_delta(0.1, 0.0),
            perturbed(Sign::Plus),
        )
        .grid(Grid { l1: L, l2: L, n1: 1024, n2: 2048 })
        .time(1.7e-5, 0.17, 1e-4)
        .every_step()
        .expect(blow_up(0.1555)),
    );

    // self-steepening orthogonal to the off-axis direction
    for (sign, e, text) in [
        (Sign::Minus, MonotoneDecreasing, "Partial off-axis dispersion with orthogonal self-steepening delta = (0, 1), sigma = 1, - perturbation: purely dispersive, monotone decay."),
        (
            Sign::Plus,
            Oscillatory,
            "Partial off-axis dispersion with orthogonal self-steepening delta = (0, 1), sigma = 1, + perturbation: \
             the sup norm oscillates.",
        ),
    ] {
        out.push(
            Preset::new(format!("partial_orthogonal_sigma1_{}", sign_name(sign)), text, partial(1.0).with_delta(0.0, 1.0), perturbed(sign))
                .time(1e-2, 20.0, 1e-2)
                .expect(vec![e]),
        );
    }
    out.push(
        Preset::new(
            "partial_orthogonal_sigma3_plus",
            "Partial off-axis dispersion with orthogonal self-steepening delta = (0, 0.1), sigma = 3, + perturbation: \
             the solution focuses up to a point, then the sup norm decreases again.",
            partial(3.0).with_delta(0.0, 0.1),
            perturbed(Sign::Plus),
        )
        .grid(Grid { l1: L, l2: L, n1: 1024, n2: 2048 })
        .time(5e-5, 0.5, 2e-4)
        .expect(vec![ReachesEnd, FocusThenDecay]),
    );

    // Gaussian data with weak orthogonal self-steepening
    let gauss = nls.with_delta(0.0, 0.1);
    out.push(
        Preset::new(
            "gauss_orthogonal_eps0",
            "Cubic NLS with self-steepening delta = (0, 0.1), Gaussian 4 exp(-|x|^2), no off-axis term: \
             blow-up at t = 0.1445.",
            gauss,
            InitialSpec::Gaussian { amplitude: 4.0 },
        )
        .grid(square(2.0, N))
        .time(1e-5, 0.25, 1e-4)
        .every_step()
        .expect(blow_up(0.1445)),
    );
    out.push(
        Preset::new(
            "gauss_orthogonal_eps01",
            "Same Gaussian with a weak off-axis term epsilon = 0.1 along x1: instead of blowing up, \
             the sup norm oscillates after t = 0.1445.",
            gauss.with_off_axis(0.1, Axes::X1),
            InitialSpec::Gaussian { amplitude: 4.0 },
        )
        .grid(square(2.0, N))
        .time(1e-5, 0.5, 1e-4)
        .every_step()
        .expect(vec![ReachesEnd, OscillatesAfter { t: 0.1445 }]),
    );
    out
}

pub fn preset_names() -> Vec<String> {
    catalog().into_iter().map(|p| p.name).collect()
}

pub fn find_preset(name: &str) -> Result<Preset> {
    catalog().into_iter().find(|p| p.name == name).ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Canonical configuration of a named preset.
pub fn preset_config(name: &str, reduced: bool) -> Result<RunConfig> {
    find_preset(name)?.config(reduced)
}
