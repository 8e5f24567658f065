//! Outcome predicates. All of them are functions of a [`RunRecord`] alone,
//! so verdicts can be re-derived from stored records.

use serde::{Deserialize, Serialize};

use crate::evolution::{RunRecord, RunStatus};
use crate::spectral::Field;

/// Relative slack allowed for a sample to count as "not increasing".
pub const MONOTONE_SLACK: f64 = 1e-8;
/// Band around the initial `L^inf` norm for the oscillatory predicate.
pub const OSCILLATION_BAND: (f64, f64) = (0.5, 2.0);
pub const MIN_OSCILLATIONS: usize = 3;
/// A run "disperses" when its final `L^inf` norm is at most this fraction
/// of the initial one.
pub const DISPERSED_FRACTION: f64 = 0.75;
/// Humps must reach this fraction of the global maximum.
pub const HUMP_FRACTION: f64 = 0.5;
/// A focusing peak must exceed both endpoints by this factor.
pub const FOCUS_MARGIN: f64 = 1.01;

/// No sample exceeds its predecessor by more than `slack` (relative).
pub fn monotone_decreasing(linf: &[f64], slack: f64) -> bool {
    linf.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}

/// Indices of interior local maxima (`a[i-1] < a[i] >= a[i+1]`).
pub fn local_maxima(a: &[f64]) -> Vec<usize> {
    (1..a.len().saturating_sub(1)).filter(|&i| a[i] > a[i - 1] && a[i] >= a[i + 1]).collect()
}

/// Stays within the band around its initial value and has at least
/// [`MIN_OSCILLATIONS`] local maxima.
pub fn oscillatory(linf: &[f64]) -> bool {
    let Some(&first) = linf.first() else { return false };
    let (lo, hi) = OSCILLATION_BAND;
    linf.iter().all(|&m| m >= lo * first && m <= hi * first) && local_maxima(linf).len() >= MIN_OSCILLATIONS
}

pub fn dispersed(linf: &[f64]) -> bool {
    match (linf.first(), linf.last()) {
        (Some(&a), Some(&b)) => b <= DISPERSED_FRACTION * a,
        _ => false,
    }
}

/// Global maximum strictly inside the run, above both endpoints by
/// [`FOCUS_MARGIN`].
pub fn focus_then_decay(linf: &[f64]) -> bool {
    if linf.len() < 3 {
        return false;
    }
    let (imax, &peak) = linf.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let (first, last) = (linf[0], linf[linf.len() - 1]);
    imax > 0 && imax + 1 < linf.len() && peak >= FOCUS_MARGIN * first && peak >= FOCUS_MARGIN * last
}

/// Periodic 8-neighbour local maxima of `|u|` at or above `fraction` of the
/// global maximum. Plateaus count once.
pub fn count_humps(field: &Field, fraction: f64) -> usize {
    let (n1, n2) = field.shape();
    let m = field.modulus();
    let top = m.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    let at = |i: isize, j: isize| m[(i.rem_euclid(n1 as isize) as usize) * n2 + j.rem_euclid(n2 as isize) as usize];
    let mut count = 0;
    for i in 0..n1 as isize {
        for j in 0..n2 as isize {
            let v = at(i, j);
            if v < fraction * top {
                continue;
            }
            let mut is_max = true;
            'nb: for di in -1..=1isize {
                for dj in -1..=1isize {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let w = at(i + di, j + dj);
                    // ties go to the first point in scan order
                    let earlier = (di, dj) < (0, 0);
                    if w > v || (earlier && w == v) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            count += is_max as usize;
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// Mass-drift or overflow stop at `t`, within `rel_tol` (doubled at
    /// reduced resolution).
    BlowUp { t: f64, rel_tol: f64 },
    /// The run reaches its final time.
    ReachesEnd,
    MonotoneDecreasing,
    Oscillatory,
    Dispersive,
    /// At least [`MIN_OSCILLATIONS`] local maxima of `L^inf` after `t`.
    OscillatesAfter { t: f64 },
    /// At least `min` humps in the snapshot nearest to `t`.
    Humps { t: f64, min: usize },
    FocusThenDecay,
    /// Last recorded frame velocity component within `tol` of `value`.
    FinalVelocity { component: usize, value: f64, tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub expectation: Expectation,
    pub passed: bool,
    pub detail: String,
}

impl Expectation {
    pub fn check(&self, rec: &RunRecord, reduced: bool) -> Check {
        let linf = rec.linf();
        let reached = rec.status.reached_end();
        let status = format!("{:?}", rec.status);
        let (passed, detail) = match *self {
            Expectation::BlowUp { t, rel_tol } => {
                let tol = if reduced { 2.0 * rel_tol } else { rel_tol };
                match rec.status.stop_time() {
                    Some(s) => ((s - t).abs() <= tol * t, format!("stopped at t = {s} (expected {t} +- {:.0}%)", tol * 100.0)),
                    None => (false, format!("no blow-up stop ({status})")),
                }
            }
            Expectation::ReachesEnd => (reached, status),
            Expectation::MonotoneDecreasing => {
                let ok = monotone_decreasing(&linf, MONOTONE_SLACK);
                (reached && ok, format!("{status}, monotone = {ok}"))
            }
            Expectation::Oscillatory => {
                let peaks = local_maxima(&linf).len();
                let (lo, hi) = linf.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &m| (l.min(m), h.max(m)));
                let first = linf.first().copied().unwrap_or(0.0);
                (
                    reached && oscillatory(&linf),
                    format!("{status}, {peaks} maxima, range [{:.3}, {:.3}] x initial", lo / first, hi / first),
                )
            }
            Expectation::Dispersive => {
                let ratio = linf.last().unwrap_or(&0.0) / linf.first().unwrap_or(&1.0);
                (reached && dispersed(&linf), format!("{status}, final/initial = {ratio:.3}"))
            }
            Expectation::OscillatesAfter { t } => {
                let tail: Vec<f64> = rec.samples.iter().filter(|s| s.t >= t).map(|s| s.linf).collect();
                let peaks = local_maxima(&tail).len();
                (reached && peaks >= MIN_OSCILLATIONS, format!("{status}, {peaks} maxima after t = {t}"))
            }
            Expectation::Humps { t, min } => match rec.snapshot_near(t) {
                Some(s) if (s.t - t).abs() <= 1e-6 + 1e-9 * t.abs() || (s.t - t).abs() < 0.51 * dt_of(rec) => {
                    let n = count_humps(&s.field, HUMP_FRACTION);
                    (n >= min, format!("{n} humps at t = {}", s.t))
                }
                _ => (false, format!("no snapshot at t = {t}")),
            },
            Expectation::FocusThenDecay => {
                let ok = focus_then_decay(&linf);
                (reached && ok, format!("{status}, focus-then-decay = {ok}"))
            }
            Expectation::FinalVelocity { component, value, tol } => match rec.samples.last() {
                Some(s) => {
                    let v = s.v[component.min(1)];
                    ((v - value).abs() <= tol, format!("v{} = {v:.4} at t = {}", component + 1, s.t))
                }
                None => (false, "no samples".into()),
            },
        };
        Check { expectation: *self, passed, detail }
    }
}

fn dt_of(rec: &RunRecord) -> f64 {
    match rec.samples.as_slice() {
        [a, b, ..] => b.t - a.t,
        _ => f64::INFINITY,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub matched: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn evaluate(expectations: &[Expectation], rec: &RunRecord, reduced: bool) -> Self {
        let checks: Vec<Check> = expectations.iter().map(|e| e.check(rec, reduced)).collect();
        Verdict { matched: checks.iter().all(|c| c.passed), checks }
    }

    pub fn label(&self) -> &'static str {
        if self.matched {
            "match"
        } else {
            "mismatch"
        }
    }
}

/// Shorthand used in summaries.
pub fn status_label(s: &RunStatus) -> &'static str {
    match s {
        RunStatus::Completed => "completed",
        RunStatus::ResolutionWarn(_) => "resolution_warn",
        RunStatus::MassDriftStop(_) => "mass_drift_stop",
        RunStatus::OverflowStop(_) => "overflow_stop",
    }
}
