//! Binary field snapshots.
//!
//! Layout (little-endian): `b"DNLS"`, `u32` version, `u32 N1`, `u32 N2`,
//! `f64 L1`, `f64 L2`, `f64 t`, `u8` space tag (0 physical, 1 spectral),
//! then `N1 * N2` complex values as interleaved `f64` pairs, row-major with
//! `x2` fastest.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Space};

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"DNLS";
pub const SNAPSHOT_VERSION: u32 = 1;
pub const SNAPSHOT_HEADER_LEN: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotMeta {
    pub grid: Grid,
    pub t: f64,
}

pub fn encode_snapshot(field: &Field, meta: &SnapshotMeta) -> Result<Vec<u8>> {
    let g = &meta.grid;
    if field.shape() != g.shape() {
        return Err(Error::Shape { expected: g.shape(), got: field.shape() });
    }
    let n1 = u32::try_from(g.n1).map_err(|_| Error::Snapshot("N1 does not fit in u32".into()))?;
    let n2 = u32::try_from(g.n2).map_err(|_| Error::Snapshot("N2 does not fit in u32".into()))?;
    let mut out = Vec::with_capacity(SNAPSHOT_HEADER_LEN + 16 * field.values.len());
    out.extend_from_slice(&SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&n1.to_le_bytes());
    out.extend_from_slice(&n2.to_le_bytes());
    for x in [g.l1, g.l2, meta.t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out.push(field.space.tag());
    for z in &field.values {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<(Field, SnapshotMeta)> {
    if bytes.len() < SNAPSHOT_HEADER_LEN {
        return Err(Error::Snapshot(format!("truncated header ({} bytes)", bytes.len())));
    }
    if bytes[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let (n1, n2) = (u32_at(8) as usize, u32_at(12) as usize);
    let (l1, l2, t) = (f64_at(16), f64_at(24), f64_at(32));
    let space = Space::from_tag(bytes[40]).ok_or_else(|| Error::Snapshot(format!("bad space tag {}", bytes[40])))?;
    let grid = Grid::new(l1, l2, n1, n2).map_err(|e| Error::Snapshot(format!("bad header: {e}")))?;
    let want = 16 * n1 * n2;
    let payload = &bytes[SNAPSHOT_HEADER_LEN..];
    if payload.len() != want {
        return Err(Error::Snapshot(format!("payload is {} bytes, expected {want}", payload.len())));
    }
    let values = payload
        .chunks_exact(16)
        .map(|c| Complex64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap())))
        .collect();
    Ok((Field { values, n1, n2, space }, SnapshotMeta { grid, t }))
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never observe a partial file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::invalid("path", format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn write_snapshot(field: &Field, meta: &SnapshotMeta, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_snapshot(field, meta)?)
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(Field, SnapshotMeta)> {
    decode_snapshot(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_layout() {
        let g = Grid::new(1.0, 2.0, 2, 2).unwrap();
        let f = Field::zeros(&g, Space::Physical);
        let b = encode_snapshot(&f, &SnapshotMeta { grid: g, t: 0.5 }).unwrap();
        assert_eq!(b.len(), SNAPSHOT_HEADER_LEN + 64);
        assert!(b[SNAPSHOT_HEADER_LEN..].iter().all(|&x| x == 0));
        assert_eq!(&b[..4], b"DNLS");
        assert_eq!(b[4..8], [1, 0, 0, 0]);
        assert_eq!(b[8..12], [2, 0, 0, 0]);
        assert_eq!(f64::from_le_bytes(b[24..32].try_into().unwrap()), 2.0);
        assert_eq!(f64::from_le_bytes(b[32..40].try_into().unwrap()), 0.5);
        assert_eq!(b[40], 0);
    }

    #[test]
    fn round_trip_is_bitwise() {
        let g = Grid::new(3.0, 1.5, 4, 8).unwrap();
        let mut f = Field::from_fn(&g, |x, y| Complex64::new(x.sin() * 1e-300, y / 3.0));
        f.values[3] = Complex64::new(-0.0, f64::MIN_POSITIVE);
        f.space = Space::Spectral;
        let meta = SnapshotMeta { grid: g, t: 1.0 / 3.0 };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.snap");
        write_snapshot(&f, &meta, &p).unwrap();
        let (h, m) = read_snapshot(&p).unwrap();
        assert_eq!(m, meta);
        assert_eq!(h.space, Space::Spectral);
        for (a, b) in f.values.iter().zip(&h.values) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_corrupt_input() {
        let g = Grid::new(1.0, 1.0, 2, 2).unwrap();
        let good = encode_snapshot(&Field::zeros(&g, Space::Physical), &SnapshotMeta { grid: g, t: 0.0 }).unwrap();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode_snapshot(&bad), Err(Error::Snapshot(m)) if m.contains("magic")));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(decode_snapshot(&bad), Err(Error::Snapshot(m)) if m.contains("version")));
        assert!(decode_snapshot(&good[..good.len() - 1]).is_err());
        assert!(decode_snapshot(&good[..20]).is_err());
        let mut bad = good;
        bad[40] = 7;
        assert!(decode_snapshot(&bad).is_err());
        let other = Grid::new(1.0, 1.0, 4, 4).unwrap();
        assert!(encode_snapshot(&Field::zeros(&g, Space::Physical), &SnapshotMeta { grid: other, t: 0.0 }).is_err());
    }
}
