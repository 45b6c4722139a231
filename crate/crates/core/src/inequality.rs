//! Empirical checks of the thick-set spectral inequality and of the
//! interpolant approximation bounds.

use crate::error::{Error, Result};
use crate::field::{PhysicalField, SpectralField};
use crate::grid::Grid;
use crate::mask::Mask;
use crate::observation::{nodal_interpolant, spacing, spectral_project, volume_average_interpolant};
use crate::seed::derive_seed;
use crate::transform::{forward, inverse_unchecked};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Ratios above this are treated as a vanishing masked norm.
pub const RATIO_LIMIT: f64 = 1e15;

/// Unit-L² zero-mean field with independent standard complex normal
/// amplitudes on `max(|kx|, |ky|) ≤ k`.
pub fn sample_bandlimited(k: u32, seed: u64, grid: Grid) -> Result<SpectralField> {
    let n = grid.n();
    if k == 0 || 2 * k as usize >= n {
        return Err(Error::InvalidParameter(format!(
            "band K = {k} must satisfy 1 <= K < n/2 = {}",
            n / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = k as i64;
    let mut f = SpectralField::zeros(grid);
    for ky in 0..=k {
        for kx in -k..=k {
            if ky == 0 && kx <= 0 {
                continue;
            }
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            f.set_mode(kx, ky, Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2);
        }
    }
    let norm = f.l2_norm();
    Ok(f.scaled(1.0 / norm))
}

/// `‖f‖²_{L²(Ω₀)} / ‖f‖²_{L²(Ω)}`.
pub fn thickness_ratio(f: &PhysicalField, mask: &Mask) -> Result<f64> {
    let inside = f.masked_l2_norm(mask)?;
    let total = f.l2_norm();
    let ratio = (total / inside).powi(2);
    if inside == 0.0 || !(ratio <= RATIO_LIMIT) {
        return Err(Error::DegenerateRatio(ratio));
    }
    Ok(ratio)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    /// Growth of `log(max ratio)` per unit `K`; the estimate of `C_Ω`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub max_ratio_observed: f64,
    pub samples: usize,
    /// `(K, max ratio)` per band.
    pub rows: Vec<(u32, f64)>,
}

impl FitResult {
    pub const CSV_HEADER: &'static str = "K,max_ratio,log_max_ratio";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for &(k, r) in &self.rows {
            s.push_str(&format!("{k},{r:e},{:e}\n", r.ln()));
        }
        s
    }

    /// Sampling only ever sees a lower bound on the extremal ratio.
    pub fn summary(&self) -> String {
        format!(
            "{{\"slope\": {:e}, \"intercept\": {:e}, \"r_squared\": {:e}, \"max_ratio_observed\": {:e}, \"samples\": {}, \"note\": \"max over samples; underestimates the extremal constant\"}}",
            self.slope, self.intercept, self.r_squared, self.max_ratio_observed, self.samples
        )
    }
}

/// Fits `log(max ratio)` against `K`. Each sample is drawn by
/// [`sample_bandlimited`] and then pushed `refine` times through
/// `f ← P_K((1 − χΩ) f)`, a power iteration toward the band-limited field
/// least visible in `Ω`. `refine = 0` is plain sampling.
pub fn fit_spectral_constant(
    mask: &Mask,
    k_list: &[u32],
    samples_per_k: usize,
    refine: usize,
    seed: u64,
) -> Result<FitResult> {
    if k_list.is_empty() || samples_per_k == 0 {
        return Err(Error::InvalidParameter("need at least one K and one sample".into()));
    }
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("K list must be strictly increasing".into()));
    }
    if mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    let grid = mask.grid();
    let outside = Mask::from_fn(grid, |ix, iy| !mask.get(ix, iy));
    let mut rows = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let mut best = 0.0f64;
        for i in 0..samples_per_k {
            let s = derive_seed(seed, &format!("spectral/K{k}/sample{i}"));
            let mut f = sample_bandlimited(k, s, grid)?;
            for _ in 0..refine {
                let g = spectral_project(&forward(&inverse_unchecked(&f).masked(&outside)), k)?;
                let norm = g.l2_norm();
                if norm == 0.0 {
                    break;
                }
                f = g.scaled(1.0 / norm);
            }
            best = best.max(thickness_ratio(&inverse_unchecked(&f), mask)?);
        }
        rows.push((k, best));
    }
    let xs: Vec<f64> = rows.iter().map(|&(k, _)| k as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|&(_, r)| r.ln()).collect();
    let (slope, intercept, r_squared) = if rows.len() >= 2 {
        crate::assimilation::linear_fit(&xs, &ys)
    } else {
        (0.0, ys[0], 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        max_ratio_observed: rows.iter().map(|&(_, r)| r).fold(0.0, f64::max),
        samples: samples_per_k * k_list.len(),
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxKind {
    /// Volume averages, error over `h‖f‖_{H¹}`.
    Volume,
    /// Cell-center values, error over `h²‖f‖_{H²}`.
    Nodal,
}

impl ApproxKind {
    pub fn name(&self) -> &'static str {
        match self {
            ApproxKind::Volume => "volume",
            ApproxKind::Nodal => "nodal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "volume" => Some(ApproxKind::Volume),
            "nodal" => Some(ApproxKind::Nodal),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxRow {
    pub p: u32,
    pub h: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxTable {
    pub kind: ApproxKind,
    pub rows: Vec<ApproxRow>,
    /// Largest ratio over all strides.
    pub c0: f64,
}

impl ApproxTable {
    pub const CSV_HEADER: &'static str = "p,h,max_ratio";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            s.push_str(&format!("{},{:e},{:e}\n", r.p, r.h, r.max_ratio));
        }
        s
    }

    /// Largest over smallest ratio across strides.
    pub fn spread(&self) -> f64 {
        let max = self.rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
        let min = self.rows.iter().map(|r| r.max_ratio).fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Sobolev norm `‖f‖_{H^s}` with weight `(1 + |k|²)^s`, computed spectrally.
pub fn sobolev_norm(f: &SpectralField, s: i32) -> f64 {
    let grid = f.grid();
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (kx, ky) = grid.mode(i);
            (1.0 + (kx * kx + ky * ky) as f64).powi(s) * c.norm_sqr()
        })
        .sum();
    grid.length() * sum.sqrt()
}

/// Interpolation error ratios over an ensemble of `ensemble` fields with band `band`.
pub fn verify_approx_inequality(
    kind: ApproxKind,
    p_list: &[u32],
    mask: &Mask,
    ensemble: usize,
    band: u32,
    seed: u64,
) -> Result<ApproxTable> {
    let grid = mask.grid();
    if ensemble == 0 {
        return Err(Error::InvalidParameter("ensemble must be nonempty".into()));
    }
    let fields = (0..ensemble)
        .map(|i| {
            let f = sample_bandlimited(band, derive_seed(seed, &format!("approx/field{i}")), grid)?;
            Ok((inverse_unchecked(&f), f))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let h = spacing(grid, p);
        let mut best = 0.0f64;
        for (phys, spec) in &fields {
            let approx = match kind {
                ApproxKind::Volume => volume_average_interpolant(phys, p, mask)?,
                ApproxKind::Nodal => nodal_interpolant(phys, p, mask)?,
            };
            let err = approx.sub(phys).masked_l2_norm(mask)?;
            let scale = match kind {
                ApproxKind::Volume => h * sobolev_norm(spec, 1),
                ApproxKind::Nodal => h * h * sobolev_norm(spec, 2),
            };
            best = best.max(err / scale);
        }
        rows.push(ApproxRow { p, h, max_ratio: best });
    }
    let c0 = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    Ok(ApproxTable { kind, rows, c0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_unit_zero_mean_and_reproducible() {
        let g = Grid::new(32).unwrap();
        let f = sample_bandlimited(3, 9, g).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        assert_eq!(f.mean(), 0.0);
        assert!(f.hermitian_defect() < 1e-15);
        assert_eq!(f, sample_bandlimited(3, 9, g).unwrap());
        assert_ne!(f, sample_bandlimited(3, 10, g).unwrap());
        let populated = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                c.norm() > 0.0 && {
                    let (kx, ky) = g.mode(*i);
                    kx.abs().max(ky.abs()) > 3
                }
            })
            .count();
        assert_eq!(populated, 0);
    }

    #[test]
    fn k1_has_four_pairs() {
        let g = Grid::new(16).unwrap();
        let f = sample_bandlimited(1, 1, g).unwrap();
        assert_eq!(f.coeffs().iter().filter(|c| c.norm() > 0.0).count(), 8);
    }

    #[test]
    fn band_must_fit() {
        let g = Grid::new(16).unwrap();
        assert!(sample_bandlimited(8, 0, g).is_err());
        assert!(sample_bandlimited(0, 0, g).is_err());
    }

    #[test]
    fn ratios() {
        let g = Grid::new(64).unwrap();
        let f = PhysicalField::from_fn(g, |x, _| x.sin());
        assert!((thickness_ratio(&f, &Mask::full(g)).unwrap() - 1.0).abs() < 1e-14);
        let half = Mask::from_fn(g, |ix, _| ix < 32);
        assert!((thickness_ratio(&f, &half).unwrap() - 2.0).abs() < 1e-12);
        let strip = Mask::from_fn(g, |ix, _| ix == 0);
        assert!(matches!(thickness_ratio(&f, &strip), Err(Error::DegenerateRatio(_))));
        assert!(matches!(thickness_ratio(&f, &Mask::empty(g)), Err(Error::EmptyMask)));
    }

    #[test]
    fn full_mask_fit_is_flat() {
        let g = Grid::new(32).unwrap();
        let fit = fit_spectral_constant(&Mask::full(g), &[2, 3, 4, 5], 3, 2, 4).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!(fit.rows.iter().all(|&(_, r)| (r - 1.0).abs() < 1e-12));
        assert_eq!(fit.samples, 12);
        assert!(fit.to_csv().starts_with("K,max_ratio,log_max_ratio\n2,"));
    }

    #[test]
    fn sobolev_of_sine() {
        let g = Grid::new(16).unwrap();
        let f = forward(&PhysicalField::from_fn(g, |x, _| (2.0 * x).sin()));
        let l2 = std::f64::consts::PI * 2f64.sqrt();
        assert!((sobolev_norm(&f, 0) - l2).abs() < 1e-12);
        assert!((sobolev_norm(&f, 1) - 5f64.sqrt() * l2).abs() < 1e-12);
        assert!((sobolev_norm(&f, 2) - 5.0 * l2).abs() < 1e-12);
    }

    #[test]
    fn bad_stride_is_clean_error() {
        let g = Grid::new(16).unwrap();
        let r = verify_approx_inequality(ApproxKind::Nodal, &[5], &Mask::full(g), 2, 2, 0);
        assert!(matches!(r, Err(Error::StrideMismatch { .. })));
    }
}
