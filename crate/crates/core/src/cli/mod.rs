//! The `dnls` command line.
//!
//! ```text
//! dnls stationary <config> [--out FILE]
//! dnls evolve <config> [--out-dir DIR]
//! dnls explicit-1d --sigma S --eps E --delta D (--x X | --from A --to B --points N) [--out FILE]
//! dnls preset list
//! dnls preset run <name> [--reduced] [--out-dir DIR] [--no-cache]
//! dnls verify
//! ```
//!
//! Exit status: 0 on success or a matching verdict, 1 on a mismatch or a
//! failed computation, 2 on a configuration or usage error.

mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::evolution::RunRecord;
use crate::io::{read_config, write_atomic, write_snapshot, write_time_series, RunConfig, SnapshotMeta};
use crate::presets::{catalog, run_config, run_preset, solve_stationary, status_label, StateCache};
use crate::spectral::inverse_transform;
use crate::stationary::{amplitude_1d, phase_1d};

pub use verify::{verify_suite, VerifyCheck};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dnls", version, about = "Stationary states and time evolution for 2D derivative NLS equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for a stationary state and write it as a snapshot.
    Stationary {
        config: PathBuf,
        /// Defaults to `<output.dir>/<output.state>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an evolution; writes the time series, snapshots and final state.
    Evolve {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Tabulate the closed-form 1D profile as CSV.
    #[command(name = "explicit-1d")]
    Explicit1d(Explicit1dArgs),
    /// List or run catalog experiments.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Run the built-in consistency checks.
    Verify,
}

#[derive(Debug, Args)]
struct Explicit1dArgs {
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// A single abscissa; overrides the range.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    List,
    Run {
        name: String,
        /// Halved resolution with the preset's coarse time step.
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Solve stationary states afresh instead of using the disk cache.
        #[arg(long)]
        no_cache: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    if e.is_configuration() {
        EXIT_CONFIG
    } else {
        EXIT_MISMATCH
    }
}

fn load(path: &Path) -> Result<RunConfig> {
    read_config(path).map_err(|e| match e {
        Error::Io(io) => Error::invalid("config", format!("{}: {io}", path.display())),
        e => e,
    })
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e)
}

/// Writes the series, the final state, every snapshot and the resolved
/// configuration into `dir`.
pub fn write_run_outputs(cfg: &RunConfig, record: &RunRecord, dir: &Path) -> Result<()> {
    let o = &cfg.output;
    write_time_series(record, dir.join(&o.series))?;
    let fin = &record.final_state;
    let u = inverse_transform(&fin.lab_frame(&cfg.grid), &cfg.grid)?;
    write_snapshot(&u, &SnapshotMeta { grid: cfg.grid, t: fin.t }, dir.join(&o.state))?;
    // snapshots stay in co-moving coordinates; the index records the shift
    let mut index = String::from("t,file,y1,y2\n");
    for (i, s) in record.snapshots.iter().enumerate() {
        let name = format!("{}_{i:03}.snap", o.snapshot_prefix);
        write_snapshot(&s.field, &SnapshotMeta { grid: cfg.grid, t: s.t }, dir.join(&name))?;
        index.push_str(&format!("{:.16e},{name},{:.16e},{:.16e}\n", s.t, s.shift[0], s.shift[1]));
    }
    if !record.snapshots.is_empty() {
        write_atomic(&dir.join(format!("{}_index.csv", o.snapshot_prefix)), index.as_bytes())?;
    }
    write_atomic(&dir.join("config.toml"), cfg.to_toml()?.as_bytes())
}

fn explicit_1d(a: &Explicit1dArgs, out: &mut dyn Write) -> Result<i32> {
    if !(a.sigma > 0.0) || !(a.eps >= 0.0) || !a.delta.is_finite() {
        return Err(Error::invalid("sigma/eps/delta", "need sigma > 0, eps >= 0 and a finite delta"));
    }
    let xs: Vec<f64> = match a.x {
        Some(x) => vec![x],
        None => {
            if a.points < 2 || !(a.to > a.from) {
                return Err(Error::invalid("points", "need at least 2 points and from < to"));
            }
            let h = (a.to - a.from) / (a.points - 1) as f64;
            (0..a.points).map(|i| a.from + i as f64 * h).collect()
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = std::iter::once(["x".to_string(), "amplitude".into(), "phase".into()]).chain(xs.iter().map(|&x| {
        [x, amplitude_1d(x, a.sigma, a.eps, a.delta), phase_1d(x, a.sigma, a.eps, a.delta)].map(|v| format!("{v:.17}"))
    }));
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Series(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Series(e.to_string()))?;
    match &a.out {
        Some(p) => write_atomic(p, &bytes)?,
        None => out.write_all(&bytes).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Stationary { config, out: path } => {
            let cfg = load(&config)?;
            let state = solve_stationary(&cfg.grid, &cfg.model, &cfg.stationary)?;
            let path = path.unwrap_or_else(|| cfg.output.dir.join(&cfg.output.state));
            write_snapshot(&state.q, &SnapshotMeta { grid: cfg.grid, t: 0.0 }, &path)?;
            writeln!(out, "residual: {:.3e}", state.residual_norm).map_err(io_err)?;
            writeln!(out, "iterations: {}", state.iterations).map_err(io_err)?;
            writeln!(out, "continuation_legs: {}", state.continuation_path.len()).map_err(io_err)?;
            writeln!(out, "written: {}", path.display()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Evolve { config, out_dir } => {
            let cfg = load(&config)?;
            let record = run_config(&cfg, &StateCache::from_env())?;
            let dir = out_dir.unwrap_or_else(|| cfg.output.dir.clone());
            write_run_outputs(&cfg, &record, &dir)?;
            writeln!(out, "status: {}", status_label(&record.status)).map_err(io_err)?;
            if let Some(t) = record.status.stop_time() {
                writeln!(out, "stop_time: {t}").map_err(io_err)?;
            }
            writeln!(out, "samples: {}", record.samples.len()).map_err(io_err)?;
            writeln!(out, "max_mass_drift: {:.3e}", record.max_mass_drift()).map_err(io_err)?;
            writeln!(out, "written: {}", dir.display()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Explicit1d(a) => explicit_1d(&a, out),
        Command::Preset { action: PresetAction::List } => {
            for p in catalog() {
                writeln!(out, "{:<34} {}", p.name, p.reference).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Preset { action: PresetAction::Run { name, reduced, out_dir, no_cache } } => {
            let cache = if no_cache { StateCache::disabled() } else { StateCache::from_env() };
            let outcome = run_preset(&name, reduced, &cache)?;
            let dir = out_dir.unwrap_or_else(|| outcome.config.output.dir.clone());
            write_run_outputs(&outcome.config, &outcome.record, &dir)?;
            outcome.write_summary(dir.join("summary.json"))?;
            let s = outcome.summary();
            writeln!(out, "preset: {}", s.name).map_err(io_err)?;
            writeln!(out, "reduced: {}", s.reduced).map_err(io_err)?;
            writeln!(out, "status: {}", s.status).map_err(io_err)?;
            if let Some(t) = s.stop_time {
                writeln!(out, "stop_time: {t}").map_err(io_err)?;
            }
            writeln!(out, "final_time: {}", s.final_time).map_err(io_err)?;
            writeln!(out, "max_mass_drift: {:.3e}", s.max_mass_drift).map_err(io_err)?;
            for c in &s.verdict.checks {
                let tag = if c.passed { "pass" } else { "fail" };
                writeln!(out, "check: {tag} {:?}: {}", c.expectation, c.detail).map_err(io_err)?;
            }
            writeln!(out, "verdict: {}", s.verdict.label()).map_err(io_err)?;
            Ok(if s.verdict.matched { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Verify => {
            let checks = verify_suite();
            for c in &checks {
                writeln!(out, "{} {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail).map_err(io_err)?;
            }
            Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

/// Runs the CLI on `argv` (program name first), writing normal output to
/// `out` and diagnostics to standard error.
pub fn cli_run<I, S>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    cli_run(argv, &mut lock)
}
