//! The periodic box `[0, 2π]²` and its Fourier lattice.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Side of the periodic box.
pub const BOX_LENGTH: f64 = 2.0 * PI;

/// Smallest nonzero eigenvalue of `-Δ` on zero-mean fields over the box.
pub const LAMBDA1: f64 = 1.0;

/// Uniform `n × n` node lattice on the periodic box.
///
/// Node `(ix, iy)` sits at `(ix·dx, iy·dx)`; physical values are stored
/// row-major with `iy` as the row. Spectral arrays use the same layout in FFT
/// order, so index `j` holds wavenumber `j` for `j < n/2` and `j - n` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n²`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn length(&self) -> f64 {
        BOX_LENGTH
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        BOX_LENGTH / self.n as f64
    }

    /// Physical coordinate of node index `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Signed wavenumber stored at FFT index `j`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// FFT index holding signed wavenumber `k` (taken modulo `n`).
    #[inline]
    pub fn index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Flat spectral index of mode `(kx, ky)`.
    #[inline]
    pub fn mode_index(&self, kx: i64, ky: i64) -> usize {
        self.index(ky) * self.n + self.index(kx)
    }

    /// Flat index of the mode `-k` given the flat index of `k`.
    #[inline]
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let (iy, ix) = (flat / self.n, flat % self.n);
        ((self.n - iy) % self.n) * self.n + (self.n - ix) % self.n
    }

    /// Wavenumber pair `(kx, ky)` of a flat spectral index.
    #[inline]
    pub fn mode(&self, flat: usize) -> (i64, i64) {
        (self.wavenumber(flat % self.n), self.wavenumber(flat / self.n))
    }

    /// `|k|²` for every flat spectral index.
    pub fn k_squared(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (kx, ky) = self.mode(i);
                (kx * kx + ky * ky) as f64
            })
            .collect()
    }

    /// A mode survives the two-thirds rule iff `3·max(|kx|, |ky|) < n`.
    #[inline]
    pub fn is_resolved(&self, kx: i64, ky: i64) -> bool {
        3 * kx.abs().max(ky.abs()) < self.n as i64
    }

    /// Largest retained `max(|kx|, |ky|)` under the two-thirds rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n as i64 - 1) / 3
    }
}
