//! Time-independent forcing on a wavenumber annulus, normalized by Grashof number.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{Grid, LAMBDA1};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct ForcingSpec {
    pub band_lo: u32,
    pub band_hi: u32,
    pub grashof: f64,
    pub nu: f64,
    pub seed: u64,
}

impl Default for ForcingSpec {
    fn default() -> Self {
        Self {
            band_lo: 10,
            band_hi: 12,
            grashof: 5e4,
            nu: 1e-3,
            seed: 0,
        }
    }
}

impl ForcingSpec {
    pub fn validate(&self, grid: Grid) -> Result<()> {
        let bad = Error::InvalidForcingBand {
            lo: self.band_lo,
            hi: self.band_hi,
            n: grid.n(),
        };
        if self.band_lo == 0 || self.band_lo > self.band_hi {
            return Err(bad);
        }
        // Every mode with |k| ≤ band_hi must survive the two-thirds rule.
        if !grid.is_resolved(self.band_hi as i64, 0) {
            return Err(bad);
        }
        if !(self.nu > 0.0) || !(self.grashof >= 0.0) || !self.grashof.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "forcing needs nu > 0 and finite grashof >= 0 (nu = {}, G = {})",
                self.nu, self.grashof
            )));
        }
        Ok(())
    }

    /// Target `‖f‖_{L²(Ω₀)} = G·ν²·λ1` for the velocity forcing.
    pub fn target_norm(&self) -> f64 {
        self.grashof * self.nu * self.nu * LAMBDA1
    }
}

/// Vorticity forcing with unit-modulus random phases on
/// `band_lo ≤ |k| ≤ band_hi`, scaled so that `grashof(f, ν)` equals the
/// requested Grashof number.
///
/// The returned spectrum drives the vorticity equation (it is `curl f`); the
/// Grashof number is defined by the velocity forcing `f`, whose norm is
/// [`velocity_forcing_norm`].
pub fn build_forcing(spec: &ForcingSpec, grid: Grid) -> Result<SpectralField> {
    spec.validate(grid)?;
    let (lo2, hi2) = ((spec.band_lo as i64).pow(2), (spec.band_hi as i64).pow(2));
    let kmax = spec.band_hi as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut f = SpectralField::zeros(grid);
    let mut populated = 0usize;
    // Canonical half-plane: ky > 0, or ky == 0 and kx > 0. Visiting order is fixed.
    for ky in 0..=kmax {
        for kx in -kmax..=kmax {
            if ky == 0 && kx <= 0 {
                continue;
            }
            let k2 = kx * kx + ky * ky;
            if k2 < lo2 || k2 > hi2 {
                continue;
            }
            let theta = rng.gen_range(0.0..2.0 * PI);
            f.set_mode(kx, ky, Complex64::from_polar(1.0, theta));
            populated += 1;
        }
    }
    if populated == 0 {
        return Err(Error::InvalidForcingBand {
            lo: spec.band_lo,
            hi: spec.band_hi,
            n: grid.n(),
        });
    }
    let norm = velocity_forcing_norm(&f);
    Ok(f.scaled(spec.target_norm() / norm))
}

/// `‖f‖_{L²(Ω₀)}` of the divergence-free velocity forcing whose curl is
/// `curl_f`: `L·sqrt(Σ |ĝ_k|²/|k|²)`.
pub fn velocity_forcing_norm(curl_f: &SpectralField) -> f64 {
    let grid = curl_f.grid();
    let sum: f64 = curl_f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (kx, ky) = grid.mode(i);
            let k2 = (kx * kx + ky * ky) as f64;
            if k2 == 0.0 {
                0.0
            } else {
                c.norm_sqr() / k2
            }
        })
        .sum();
    grid.length() * sum.sqrt()
}

/// `G = ‖f‖_{L²(Ω₀)} / (ν² λ1)` for time-independent forcing, with `curl_f`
/// the vorticity-equation forcing.
pub fn grashof(curl_f: &SpectralField, nu: f64) -> f64 {
    velocity_forcing_norm(curl_f) / (nu * nu * LAMBDA1)
}
