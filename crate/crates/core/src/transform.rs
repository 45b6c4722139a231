//! Real ↔ spectral transforms on the periodic box.
//!
//! `forward` divides by `n²` so coefficients are Fourier-series amplitudes.
//! Two real fields can share one complex FFT (`forward_pair`/`inverse_pair`),
//! which the nonlinear term and the solver use on every step.

use crate::error::{Error, Result};
use crate::field::{PhysicalField, SpectralField};
use crate::grid::Grid;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Hermitian defect tolerated by [`inverse`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

thread_local! {
    static SCRATCH: std::cell::RefCell<Vec<Complex64>> = const { std::cell::RefCell::new(Vec::new()) };
}

pub(crate) struct Plan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Per flat spectral index: `kx`, `ky`, `|k|²`, `1/|k|²` (0 at k = 0),
    /// two-thirds-rule membership, and the index of `-k`.
    pub(crate) kx: Vec<f64>,
    pub(crate) ky: Vec<f64>,
    pub(crate) inv_k2: Vec<f64>,
    pub(crate) resolved: Vec<bool>,
    pub(crate) conj: Vec<usize>,
}

/// Cached FFT plans and wavenumber tables for `grid`.
pub(crate) fn tables(grid: Grid) -> Arc<Plan> {
    plan(grid)
}

fn plan(grid: Grid) -> Arc<Plan> {
    let n = grid.n();
    static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let mut plans = PLANS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    plans
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let modes: Vec<(i64, i64)> = (0..grid.len()).map(|i| grid.mode(i)).collect();
            let k2: Vec<f64> = modes.iter().map(|&(x, y)| (x * x + y * y) as f64).collect();
            Arc::new(Plan {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
                kx: modes.iter().map(|m| m.0 as f64).collect(),
                ky: modes.iter().map(|m| m.1 as f64).collect(),
                inv_k2: k2.iter().map(|&k| if k == 0.0 { 0.0 } else { 1.0 / k }).collect(),

                resolved: modes.iter().map(|&(x, y)| grid.is_resolved(x, y)).collect(),
                conj: (0..grid.len()).map(|i| grid.conjugate_index(i)).collect(),
            })
        })
        .clone()
}

/// Tiled in-place transpose; power-of-two strides thrash the cache otherwise.
fn transpose_square(data: &mut [Complex64], n: usize) {
    const TILE: usize = 16;
    let b = TILE.min(n);
    for bi in (0..n).step_by(b) {
        for bj in (bi..n).step_by(b) {
            for i in bi..bi + b {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..bj + b {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

impl Plan {
    /// Unnormalized 2D FFT in place: rows, transpose, rows, transpose.
    fn process(&self, data: &mut [Complex64], inverse: bool) {
        let fft = if inverse { &self.inverse } else { &self.forward };
        SCRATCH.with(|cell| {
            let mut scratch = cell.borrow_mut();
            let len = fft.get_inplace_scratch_len();
            if scratch.len() < len {
                scratch.resize(len, Complex64::new(0.0, 0.0));
            }
            fft.process_with_scratch(data, &mut scratch[..len]);
            transpose_square(data, self.n);
            fft.process_with_scratch(data, &mut scratch[..len]);
            transpose_square(data, self.n);
        });
    }
}

/// Complex 2D FFT with `1/n²` normalization.
pub(crate) fn fft2_forward(grid: Grid, data: &mut [Complex64]) {
    plan(grid).process(data, false);
    let scale = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
}

/// Unnormalized inverse of [`fft2_forward`].
pub(crate) fn fft2_inverse(grid: Grid, data: &mut [Complex64]) {
    plan(grid).process(data, true);
}

/// Fourier amplitudes of a nodal field; the mean lands in `coeff(0, 0)`.
pub fn forward(field: &PhysicalField) -> SpectralField {
    let grid = field.grid();
    let mut data: Vec<Complex64> = field.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_forward(grid, &mut data);
    let mut out = SpectralField::from_coeffs(grid, data).expect("sized by grid");
    // Exact symmetry; the FFT of real data is Hermitian only to round-off.
    out.symmetrize();
    out
}

/// Nodal values of a Hermitian spectrum.
pub fn inverse(field: &SpectralField) -> Result<PhysicalField> {
    let defect = field.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    Ok(inverse_unchecked(field))
}

pub(crate) fn inverse_unchecked(field: &SpectralField) -> PhysicalField {
    let grid = field.grid();
    let mut data = field.coeffs().to_vec();
    fft2_inverse(grid, &mut data);
    PhysicalField::from_vec_unchecked(grid, data.into_iter().map(|c| c.re).collect())
}

/// Inverse-transforms two Hermitian spectra with a single complex FFT.
pub fn inverse_pair(a: &SpectralField, b: &SpectralField) -> (PhysicalField, PhysicalField) {
    let grid = a.grid();
    let i = Complex64::new(0.0, 1.0);
    let mut data: Vec<Complex64> = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + i * y).collect();
    fft2_inverse(grid, &mut data);
    let re = data.iter().map(|c| c.re).collect();
    let im = data.iter().map(|c| c.im).collect();
    (
        PhysicalField::from_vec_unchecked(grid, re),
        PhysicalField::from_vec_unchecked(grid, im),
    )
}

/// Forward-transforms two real fields with a single complex FFT.
pub fn forward_pair(a: &PhysicalField, b: &PhysicalField) -> (SpectralField, SpectralField) {
    let grid = a.grid();
    let mut data: Vec<Complex64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    fft2_forward(grid, &mut data);
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let conj = &plan(grid).conj;
    let mut sa = Vec::with_capacity(data.len());
    let mut sb = Vec::with_capacity(data.len());
    for idx in 0..data.len() {
        let z = data[idx];
        let zc = data[conj[idx]].conj();
        sa.push(half * (z + zc));
        sb.push(minus_half_i * (z - zc));
    }
    (
        SpectralField::from_coeffs(grid, sa).expect("sized by grid"),
        SpectralField::from_coeffs(grid, sb).expect("sized by grid"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, seed: u64) -> PhysicalField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        PhysicalField::new(grid, values).unwrap()
    }

    #[test]
    fn cosine_has_two_half_amplitudes() {
        let g = Grid::new(16).unwrap();
        let s = forward(&PhysicalField::from_fn(g, |x, _| x.cos()));
        for (i, c) in s.coeffs().iter().enumerate() {
            let expected = match g.mode(i) {
                (1, 0) | (-1, 0) => 0.5,
                _ => 0.0,
            };
            assert!((c.re - expected).abs() < 1e-15 && c.im.abs() < 1e-15, "{:?}", g.mode(i));
        }
    }

    #[test]
    fn constant_lands_in_mean() {
        let g = Grid::new(8).unwrap();
        let s = forward(&PhysicalField::constant(g, 3.0));
        assert!((s.coeff(0, 0).re - 3.0).abs() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn inverse_of_half_amplitudes_is_cosine() {
        let g = Grid::new(16).unwrap();
        let mut s = SpectralField::zeros(g);
        s.set_mode(1, 0, Complex64::new(0.5, 0.0));
        let f = inverse(&s).unwrap();
        let expected = PhysicalField::from_fn(g, |x, _| x.cos());
        assert!(f.sub(&expected).linf_norm() < 1e-15);
        assert_eq!(inverse(&SpectralField::zeros(g)).unwrap().linf_norm(), 0.0);
    }

    #[test]
    fn inverse_rejects_non_hermitian() {
        let g = Grid::new(8).unwrap();
        let mut s = SpectralField::zeros(g);
        s.coeffs_mut()[g.mode_index(1, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(inverse(&s), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn round_trip_physical() {
        for n in [8, 16, 32, 64] {
            let g = Grid::new(n).unwrap();
            let f = random_field(g, n as u64);
            let back = inverse(&forward(&f)).unwrap();
            assert!(back.sub(&f).linf_norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_spectral() {
        let g = Grid::new(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = SpectralField::zeros(g);
        for i in 0..g.len() {
            let (kx, ky) = g.mode(i);
            s.set_mode(
                kx,
                ky,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let back = forward(&inverse(&s).unwrap());
        assert!(back.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn pair_transforms_match_single() {
        let g = Grid::new(32).unwrap();
        let a = random_field(g, 1);
        let b = random_field(g, 2);
        let (sa, sb) = forward_pair(&a, &b);
        assert!(sa.max_abs_diff(&forward(&a)) < 1e-14);
        assert!(sb.max_abs_diff(&forward(&b)) < 1e-14);
        let (pa, pb) = inverse_pair(&sa, &sb);
        assert!(pa.sub(&a).linf_norm() < 1e-12);
        assert!(pb.sub(&b).linf_norm() < 1e-12);
    }

    #[test]
    fn parseval() {
        let g = Grid::new(32).unwrap();
        let f = random_field(g, 3);
        let s = forward(&f);
        assert!((f.l2_norm() - s.l2_norm()).abs() < 1e-12 * f.l2_norm());
    }
}
