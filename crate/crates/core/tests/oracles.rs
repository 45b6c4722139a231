//! Independent oracles for the spectral operators and the observation maps.

use nudging::inequality::{sample_bandlimited, thickness_ratio};
use nudging::observation::{
    mask_at, observe, smoother_kp, subsample, CoarseLattice, Interpolant, ObservationConfig, SubdomainSpec,
};
use nudging::ops::nonlinear_term;
use nudging::transform::{forward, inverse};
use nudging::{Grid, Mask, PhysicalField, SpectralField};
use proptest::prelude::*;

mod common;
use common::convolution_oracle;

#[test]
fn nonlinear_term_matches_direct_convolution() {
    let grid = Grid::new(16).unwrap();
    for seed in 0..10 {
        let omega = sample_bandlimited(5, seed, grid).unwrap().scaled(3.0);
        let fast = nonlinear_term(&omega).unwrap();
        let slow = convolution_oracle(&omega);
        let err = fast.max_abs_diff(&slow);
        assert!(err < 1e-12, "seed {seed}: {err:e}");
    }
}

#[test]
fn smoother_coarse_to_fine_matrix_is_stochastic() {
    // Each fine value is a convex combination of coarse values: row sums 1,
    // entries in [0, 1], so the map does not increase the max norm.
    let grid = Grid::new(32).unwrap();
    for p in 1..=3u32 {
        let m = 32 >> p;
        let mut rows = vec![0.0; grid.len()];
        for idx in 0..m * m {
            let mut unit = vec![0.0; m * m];
            unit[idx] = 1.0;
            let fine = smoother_kp(&CoarseLattice::new(grid, p, unit).unwrap());
            for (r, v) in rows.iter_mut().zip(fine.values()) {
                assert!((0.0..=1.0).contains(v));
                *r += v;
            }
        }
        assert!(rows.iter().all(|r| (r - 1.0).abs() < 1e-14), "p = {p}");
    }
}

#[test]
fn smoother_keeps_coarse_nodes() {
    let grid = Grid::new(32).unwrap();
    let f = PhysicalField::from_fn(grid, |x, y| (3.0 * x).sin() + (x - y).cos());
    for p in 0..=4 {
        let coarse = subsample(&f, p).unwrap();
        let fine = smoother_kp(&coarse);
        let s = 1usize << p;
        for j in 0..coarse.side() {
            for i in 0..coarse.side() {
                assert_eq!(fine.at(i * s, j * s), coarse.at(i, j));
            }
        }
    }
}

#[test]
fn half_strip_ratio_is_two() {
    let grid = Grid::new(64).unwrap();
    let f = PhysicalField::from_fn(grid, |x, _| x.sin());
    let mask = Mask::from_fn(grid, |ix, _| ix < 32);
    let r = thickness_ratio(&f, &mask).unwrap();
    assert!((r - 2.0).abs() < 1e-12, "{r}");
}

fn field_strategy(grid: Grid) -> impl Strategy<Value = SpectralField> {
    (any::<u64>(), 1u32..6).prop_map(move |(seed, k)| sample_bandlimited(k, seed, grid).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn observation_is_linear(
        a in field_strategy(Grid::new(32).unwrap()),
        b in field_strategy(Grid::new(32).unwrap()),
        alpha in -3.0f64..3.0,
        p in 0u32..4,
        volume in any::<bool>(),
        t in 0.0f64..1.0,
    ) {
        let mut config = ObservationConfig::new(SubdomainSpec::mobile_quarter(), p);
        if volume {
            config.interpolant = Interpolant::VolumeAverage;
        }
        let lhs = observe(&a.axpy(alpha, &b), &config, t).unwrap();
        let rhs = observe(&a, &config, t).unwrap().axpy(alpha, &observe(&b, &config, t).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!(lhs.hermitian_defect() < 1e-14);
    }

    #[test]
    fn thickness_ratio_at_least_one_and_scale_free(
        f in field_strategy(Grid::new(32).unwrap()),
        frac in 0.1f64..1.0,
        scale in 1e-3f64..1e3,
    ) {
        let grid = f.grid();
        let mask = mask_at(&SubdomainSpec::centered(frac), grid, 0.0);
        let phys = inverse(&f).unwrap();
        let r = thickness_ratio(&phys, &mask).unwrap();
        prop_assert!(r >= 1.0);
        let scaled = thickness_ratio(&phys.scaled(scale), &mask).unwrap();
        prop_assert!((r - scaled).abs() <= 1e-12 * r);
    }

    #[test]
    fn transforms_round_trip(f in field_strategy(Grid::new(16).unwrap())) {
        let back = forward(&inverse(&f).unwrap());
        prop_assert!(back.max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn smoother_max_norm_bounded(values in proptest::collection::vec(-10.0f64..10.0, 16), p in 1u32..3) {
        // 4x4 coarse lattice on n = 4·2^p
        let grid = Grid::new(4 << p).unwrap();
        let coarse = CoarseLattice::new(grid, p, values.clone()).unwrap();
        let fine = smoother_kp(&coarse);
        let bound = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(fine.linf_norm() <= bound);
    }
}
