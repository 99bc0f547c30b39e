//! Binary field snapshots with a JSON sidecar.
//!
//! Layout (little endian): 8-byte magic, `u32 N`, `u32 n`, `f64 L`, `f64 s`,
//! `f64 γ`, 16-byte convention tag, then `n^N` pairs `(re, im)` of `f64` in
//! row-major order.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::spectral::{make_grid, SpectralField, Space};

const MAGIC: &[u8; 8] = b"FHSNAP01";

/// Identifies the transform convention and the centered grid layout.
pub const CONVENTION_TAG: &[u8; 16] = b"hN-fwd/LN-inv/c1";

const HEADER_LEN: usize = 8 + 4 + 4 + 8 * 3 + 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub dim: usize,
    pub n: usize,
    pub len: f64,
    pub s: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub header: SnapshotHeader,
    pub field: SpectralField,
}

impl Snapshot {
    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.header.dim, self.header.s, self.header.gamma)
    }

    /// Refuses a snapshot whose `(N, s, γ)` differ from `p`.
    pub fn check_params(&self, p: &PhysParams) -> Result<()> {
        let h = &self.header;
        if h.dim != p.dim() || h.s != p.s() || h.gamma != p.gamma() {
            return Err(Error::Mismatch(format!(
                "snapshot has (N, s, gamma) = ({}, {}, {}) but the configuration asks for ({}, {}, {})",
                h.dim,
                h.s,
                h.gamma,
                p.dim(),
                p.s(),
                p.gamma()
            )));
        }
        Ok(())
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes the binary field and, when given, a JSON sidecar next to it.
pub fn save_snapshot<T: Serialize>(
    path: &Path,
    field: &SpectralField,
    p: &PhysParams,
    sidecar: Option<&T>,
) -> Result<()> {
    field.require_physical("save_snapshot")?;
    let g = field.grid();
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * field.values().len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for v in [g.len(), p.s(), p.gamma()] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(CONVENTION_TAG);
    for z in field.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::File::create(path)?.write_all(&buf)?;
    if let Some(meta) = sidecar {
        let json = serde_json::json!({
            "convention": String::from_utf8_lossy(CONVENTION_TAG),
            "header": SnapshotHeader { dim: g.dim(), n: g.n(), len: g.len(), s: p.s(), gamma: p.gamma() },
            "report": meta,
        });
        fs::write(sidecar_path(path), serde_json::to_string_pretty(&json)?)?;
    }
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let bad = |reason: &str| Error::Snapshot { path: path.to_path_buf(), reason: reason.to_string() };
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN {
        return Err(bad("file shorter than the header"));
    }
    if &bytes[..8] != MAGIC {
        return Err(bad("not a field snapshot (magic mismatch)"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let dim = u32_at(8);
    let n = u32_at(12);
    let (len, s, gamma) = (f64_at(16), f64_at(24), f64_at(32));
    if &bytes[40..56] != CONVENTION_TAG {
        return Err(bad("convention tag mismatch"));
    }
    let grid = make_grid(dim, n, len).map_err(|e| bad(&e.to_string()))?;
    let count = grid.total_points();
    if bytes.len() != HEADER_LEN + 16 * count {
        return Err(bad(&format!("payload holds {} bytes, expected {}", bytes.len() - HEADER_LEN, 16 * count)));
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let field = SpectralField::from_values(&grid, values, Space::Physical)?;
    Ok(Snapshot { header: SnapshotHeader { dim, n, len, s, gamma }, field })
}
