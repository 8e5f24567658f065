//! Run configuration, time-series CSV and binary field snapshots.

mod config;
mod series;
mod snapshot;

pub use config::{
    parse_config, parse_config_verbose, read_config, FrameSpec, InitialSpec, OutputSpec, RunConfig, Sign, StationarySpec,
};
pub use series::{decode_series, encode_series, read_time_series, write_time_series, SERIES_COLUMNS};
pub(crate) use snapshot::write_atomic;
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SnapshotMeta, SNAPSHOT_HEADER_LEN, SNAPSHOT_MAGIC,
    SNAPSHOT_VERSION,
};
