//! Field snapshots (NFLD) and mask bitmaps (plain PBM).
//!
//! NFLD: magic `NFLD`, `n: u32`, a reserved `u32` (zero), then `n²` little-endian
//! `f64` values, row-major with `y` as the row index.

use crate::error::{Error, Result};
use crate::field::PhysicalField;
use crate::grid::Grid;
use crate::mask::Mask;
use std::io::{Read, Write};

pub const NFLD_MAGIC: &[u8; 4] = b"NFLD";
pub const NFLD_HEADER_LEN: usize = 12;

fn nfld_err(reason: impl Into<String>) -> Error {
    Error::Format {
        kind: "NFLD",
        reason: reason.into(),
    }
}

fn pbm_err(reason: impl Into<String>) -> Error {
    Error::Format {
        kind: "PBM",
        reason: reason.into(),
    }
}

pub fn write_nfld<W: Write>(mut w: W, field: &PhysicalField) -> Result<()> {
    let n = field.grid().n() as u32;
    let mut buf = Vec::with_capacity(NFLD_HEADER_LEN + 8 * field.values().len());
    buf.extend_from_slice(NFLD_MAGIC);
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&0u32.to_le_bytes());
    for v in field.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_nfld<R: Read>(mut r: R) -> Result<PhysicalField> {
    let mut header = [0u8; NFLD_HEADER_LEN];
    r.read_exact(&mut header).map_err(|_| nfld_err("truncated header"))?;
    if &header[..4] != NFLD_MAGIC {
        return Err(nfld_err("bad magic"));
    }
    let n = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes")) as usize;
    let grid = Grid::new(n).map_err(|_| nfld_err(format!("invalid grid size {n}")))?;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != 8 * grid.len() {
        return Err(nfld_err(format!(
            "expected {} data bytes, found {}",
            8 * grid.len(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    PhysicalField::new(grid, values)
}

/// Plain (`P1`) bitmap; `1` marks an observed node. The first text row is the
/// top of the domain (largest `y`), as image viewers expect.
pub fn write_pbm<W: Write>(mut w: W, mask: &Mask) -> Result<()> {
    let n = mask.grid().n();
    let mut s = format!("P1\n{n} {n}\n");
    for iy in (0..n).rev() {
        let row: Vec<&str> = (0..n).map(|ix| if mask.get(ix, iy) { "1" } else { "0" }).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

pub fn read_pbm<R: Read>(mut r: R) -> Result<Mask> {
    let mut text = String::new();
    r.read_to_string(&mut text).map_err(|_| pbm_err("not valid text"))?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P1") {
        return Err(pbm_err("missing P1 magic"));
    }
    let mut dim = || -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| pbm_err("missing dimensions"))?
            .parse()
            .map_err(|_| pbm_err("bad dimension"))
    };
    let (w, h) = (dim()?, dim()?);
    if w != h {
        return Err(pbm_err(format!("mask must be square, got {w}x{h}")));
    }
    let grid = Grid::new(w).map_err(|_| pbm_err(format!("invalid grid size {w}")))?;
    // Plain PBM allows pixels without separators.
    let pixels: Vec<bool> = tokens
        .flat_map(str::chars)
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(pbm_err(format!("unexpected pixel {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if pixels.len() != w * w {
        return Err(pbm_err(format!("expected {} pixels, found {}", w * w, pixels.len())));
    }
    let mut bits = vec![false; w * w];
    for (row, chunk) in pixels.chunks(w).enumerate() {
        let iy = w - 1 - row;
        bits[iy * w..(iy + 1) * w].copy_from_slice(chunk);
    }
    Ok(Mask::from_bits(grid, bits).expect("sized by grid"))
}
