//! Nodal and spectral representations of real scalar fields on the box.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mask::Mask;
use num_complex::Complex64;

/// Real values at the `n × n` nodes, row-major with `iy` as the row.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    grid: Grid,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..n {
            let y = grid.coord(iy);
            for ix in 0..n {
                values.push(f(grid.coord(ix), y));
            }
        }
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.n() + ix]
    }

    /// Discrete `L²(Ω₀)` norm, `sqrt(Σ v² dx²)`.
    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        (self.values.iter().map(|v| v * v).sum::<f64>()).sqrt() * dx
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` norm restricted to the nodes set in `mask`.
    pub fn masked_l2_norm(&self, mask: &Mask) -> Result<f64> {
        if mask.grid() != self.grid {
            return Err(Error::GridMismatch(mask.grid().n(), self.grid.n()));
        }
        if mask.count() == 0 {
            return Err(Error::EmptyMask);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(mask.bits())
            .filter(|(_, &b)| b)
            .map(|(v, _)| v * v)
            .sum();
        Ok(sum.sqrt() * self.grid.dx())
    }

    /// `a·self + other`, node by node.
    pub fn axpy(&self, a: f64, other: &PhysicalField) -> PhysicalField {
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + y).collect();
        Self::from_vec_unchecked(self.grid, values)
    }

    pub fn sub(&self, other: &PhysicalField) -> PhysicalField {
        other.axpy(-1.0, self)
    }

    pub fn scaled(&self, a: f64) -> PhysicalField {
        Self::from_vec_unchecked(self.grid, self.values.iter().map(|v| a * v).collect())
    }

    /// Zeroes every node outside `mask`.
    pub fn masked(&self, mask: &Mask) -> PhysicalField {
        let values = self
            .values
            .iter()
            .zip(mask.bits())
            .map(|(&v, &b)| if b { v } else { 0.0 })
            .collect();
        Self::from_vec_unchecked(self.grid, values)
    }
}

/// Fourier-series amplitudes of a real field.
///
/// `coeff(k)` approximates `(1/L²)∫ f e^{-ik·x} dx`; the full complex lattice is
/// stored and Hermitian symmetry `coeff(-k) = conj(coeff(k))` is maintained by
/// every operation in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn coeff(&self, kx: i64, ky: i64) -> Complex64 {
        self.coeffs[self.grid.mode_index(kx, ky)]
    }

    /// Sets mode `k` and its conjugate partner `-k`.
    ///
    /// On self-conjugate modes (zero and Nyquist) only the real part is kept.
    pub fn set_mode(&mut self, kx: i64, ky: i64, value: Complex64) {
        let i = self.grid.mode_index(kx, ky);
        let j = self.grid.conjugate_index(i);
        if i == j {
            self.coeffs[i] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[i] = value;
            self.coeffs[j] = value.conj();
        }
    }

    /// Largest `|c(-k) - conj(c(k))|`, relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..self.coeffs.len())
            .map(|i| (self.coeffs[self.grid.conjugate_index(i)] - self.coeffs[i].conj()).norm())
            .fold(0.0_f64, f64::max);
        worst / scale
    }

    /// Replaces each pair by its Hermitian average.
    pub fn symmetrize(&mut self) {
        let tables = crate::transform::tables(self.grid);
        for i in 0..self.coeffs.len() {
            let j = tables.conj[i];
            if j < i {
                continue;
            }
            let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
    }

    #[inline]
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Zero-mean projection.
    #[inline]
    pub fn remove_mean(&mut self) {
        self.coeffs[0] = Complex64::new(0.0, 0.0);
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `L²(Ω₀)` norm via Parseval, `L·sqrt(Σ|c|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.grid.length() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `L²(Ω₀)` inner product of the two real fields.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        let l = self.grid.length();
        l * l
            * self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>()
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// `a·self + other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> SpectralField {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x * a + y).collect(),
        }
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        other.axpy(1.0, self)
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        other.axpy(-1.0, self)
    }

    /// Multiplies every mode by `m(kx, ky)`.
    pub fn map_modes(&self, m: impl Fn(i64, i64) -> Complex64) -> SpectralField {
        let n = self.grid.n();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (kx, ky) = (self.grid.wavenumber(i % n), self.grid.wavenumber(i / n));
                c * m(kx, ky)
            })
            .collect();
        Self {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
