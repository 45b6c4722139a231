//! Binary checkpoint: `NCKP` header followed by three spectra.
//!
//! ```text
//! magic "NCKP" | version u32 | n u32 | step u64 | time f64 | nu f64 | dt f64 | seed u64
//! ω̂, R₁, R₂ : n² × (re f64, im f64), little-endian, row-major FFT order
//! ```
//!
//! A history slot that is not yet populated is written as all-NaN.

use super::SolverState;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use num_complex::Complex64;
use std::io::{Read, Write};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"NCKP";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub state: SolverState,
    pub nu: f64,
    pub dt: f64,
    pub seed: u64,
}

fn format_err(reason: impl Into<String>) -> Error {
    Error::Format {
        kind: "checkpoint",
        reason: reason.into(),
    }
}

pub fn write_checkpoint<W: Write>(mut w: W, ckpt: &Checkpoint) -> Result<()> {
    let state = &ckpt.state;
    let grid = state.omega().grid();
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&state.step_count().to_le_bytes())?;
    w.write_all(&state.time().to_le_bytes())?;
    w.write_all(&ckpt.nu.to_le_bytes())?;
    w.write_all(&ckpt.dt.to_le_bytes())?;
    w.write_all(&ckpt.seed.to_le_bytes())?;

    let mut buf = Vec::with_capacity(grid.len() * 16 * 3);
    let mut put = |s: Option<&SpectralField>| match s {
        Some(s) => s.coeffs().iter().for_each(|c| {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }),
        None => (0..grid.len() * 2).for_each(|_| buf.extend_from_slice(&f64::NAN.to_le_bytes())),
    };
    put(Some(state.omega()));
    let mut history = state.history();
    put(history.next());
    put(history.next());
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn take<const N: usize>(bytes: &[u8], at: &mut usize) -> [u8; N] {
    let out = bytes[*at..*at + N].try_into().expect("length checked");
    *at += N;
    out
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Checkpoint> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    const HEADER: usize = 4 + 4 + 4 + 8 + 8 + 8 + 8 + 8;
    if bytes.len() < HEADER {
        return Err(format_err("truncated header"));
    }
    if &bytes[..4] != CHECKPOINT_MAGIC {
        return Err(format_err("bad magic"));
    }
    let mut at = 4;
    let version = u32::from_le_bytes(take(&bytes, &mut at));
    if version != CHECKPOINT_VERSION {
        return Err(format_err(format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(take(&bytes, &mut at)) as usize;
    let grid = Grid::new(n).map_err(|_| format_err(format!("invalid n = {n}")))?;
    let step = u64::from_le_bytes(take(&bytes, &mut at));
    let time = f64::from_le_bytes(take(&bytes, &mut at));
    let nu = f64::from_le_bytes(take(&bytes, &mut at));
    let dt = f64::from_le_bytes(take(&bytes, &mut at));
    let seed = u64::from_le_bytes(take(&bytes, &mut at));
    let expected = HEADER + 3 * grid.len() * 16;
    if bytes.len() != expected {
        return Err(format_err(format!(
            "expected {expected} bytes for n = {n}, found {}",
            bytes.len()
        )));
    }
    let mut spectra = Vec::with_capacity(3);
    for _ in 0..3 {
        let coeffs: Vec<Complex64> = (0..grid.len())
            .map(|_| {
                let re = f64::from_le_bytes(take(&bytes, &mut at));
                let im = f64::from_le_bytes(take(&bytes, &mut at));
                Complex64::new(re, im)
            })
            .collect();
        spectra.push(coeffs);
    }
    let mut spectra = spectra.into_iter();
    let omega = SpectralField::from_coeffs(grid, spectra.next().expect("three spectra"))?;
    let history = spectra
        .filter(|c| !c.iter().all(|z| z.re.is_nan() && z.im.is_nan()))
        .map(|c| SpectralField::from_coeffs(grid, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Checkpoint {
        state: SolverState::from_parts(omega, history, time, step)?,
        nu,
        dt,
        seed,
    })
}
