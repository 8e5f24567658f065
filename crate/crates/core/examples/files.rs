//! Configuration text in, time series and snapshots out, and back again.

use dnls::io::{parse_config_verbose, read_snapshot, read_time_series, write_snapshot, write_time_series, SnapshotMeta};
use dnls::presets::{run_config, StateCache};

const CONFIG: &str = r#"
[grid]
l1 = 3.0
l2 = 3.0
n1 = 64
n2 = 64

[integrator]
dt = 0.01
t_end = 0.5

[initial]
kind = "gaussian"
amplitude = 1.0
"#;

fn main() -> dnls::Result<()> {
    let (cfg, defaults) = parse_config_verbose(CONFIG)?;
    println!("{} defaults filled in, e.g. {}", defaults.len(), defaults[0]);
    let rec = run_config(&cfg, &StateCache::disabled())?;
    let dir = std::env::temp_dir().join("dnls-files-example");
    write_time_series(&rec, dir.join("series.csv"))?;
    let back = read_time_series(dir.join("series.csv"))?;
    println!("{} samples written and read back, equal: {}", back.len(), back == rec.samples);
    let u = dnls::spectral::inverse_transform(&rec.final_state.u_hat, &cfg.grid)?;
    write_snapshot(&u, &SnapshotMeta { grid: cfg.grid, t: rec.final_state.t }, dir.join("final.snap"))?;
    let (v, meta) = read_snapshot(dir.join("final.snap"))?;
    println!("snapshot at t = {} read back, equal: {}", meta.t, v == u);
    println!("resolved configuration:\n{}", cfg.to_toml()?);
    Ok(())
}
