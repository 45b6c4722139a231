//! Oracles shared by the integration tests.

use nudging::{Complex64, SpectralField};

/// `Σ_{p+q=k} u(p)·(i q ω(q))` by brute force, kept on the resolved set.
pub fn convolution_oracle(omega: &SpectralField) -> SpectralField {
    let grid = omega.grid();
    let n = grid.n() as i64;
    let modes: Vec<(i64, i64, Complex64)> = (0..grid.len())
        .map(|i| {
            let (kx, ky) = grid.mode(i);
            (kx, ky, omega.coeffs()[i])
        })
        .filter(|m| m.2.norm() > 0.0)
        .collect();
    let i = Complex64::new(0.0, 1.0);
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for &(px, py, wp) in &modes {
        let k2 = (px * px + py * py) as f64;
        // u = (∂yψ, -∂xψ), ψ = ω/|k|²
        let (u, v) = (i * py as f64 * wp / k2, -i * px as f64 * wp / k2);
        for &(qx, qy, wq) in &modes {
            let term = u * i * qx as f64 * wq + v * i * qy as f64 * wq;
            let (kx, ky) = (px + qx, py + qy);
            if 3 * kx.abs().max(ky.abs()) < n {
                acc[grid.mode_index(kx, ky)] += term;
            }
        }
    }
    SpectralField::from_coeffs(grid, acc).unwrap()
}
