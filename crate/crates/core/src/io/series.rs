//! Monitor time series as CSV, one row per sample, 17 significant digits.

use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::{RunRecord, Sample};

pub const SERIES_COLUMNS: [&str; 6] = ["t", "linf", "mass_rel_drift", "resolution", "v1", "v2"];

pub fn encode_series(samples: &[Sample]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SERIES_COLUMNS).map_err(csv_err)?;
    for s in samples {
        let row = [s.t, s.linf, s.mass_rel_drift, s.resolution, s.v[0], s.v[1]].map(|x| format!("{x:.16e}"));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Series(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn decode_series(text: &str) -> Result<Vec<Sample>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(SERIES_COLUMNS) {
        return Err(Error::Series(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let x = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Series(format!("row {}: {e}", i + 2)))?;
        out.push(Sample { t: x[0], linf: x[1], mass_rel_drift: x[2], resolution: x[3], v: [x[4], x[5]] });
    }
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Series(e.to_string())
}

pub fn write_time_series(record: &RunRecord, path: impl AsRef<Path>) -> Result<()> {
    super::snapshot::write_atomic(path.as_ref(), encode_series(&record.samples)?.as_bytes())
}

pub fn read_time_series(path: impl AsRef<Path>) -> Result<Vec<Sample>> {
    decode_series(&std::fs::read_to_string(path)?)
}
