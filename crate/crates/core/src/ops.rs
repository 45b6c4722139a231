//! Spectral differential operators: dealiasing, Poisson solve, Biot–Savart,
//! and the advection term `u·∇ω`.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::transform::{fft2_forward, fft2_inverse, tables};
use num_complex::Complex64;

/// Largest `|ω̂(0)|` accepted as zero mean, relative to the largest coefficient.
pub const MEAN_TOLERANCE: f64 = 1e-14;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two-thirds rule: zeroes every mode with `3·max(|kx|, |ky|) ≥ n`.
pub fn dealias(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(field: &mut SpectralField) {
    let tables = tables(field.grid());
    for (c, &keep) in field.coeffs_mut().iter_mut().zip(&tables.resolved) {
        if !keep {
            *c = ZERO;
        }
    }
}

fn check_zero_mean(omega: &SpectralField) -> Result<()> {
    let scale = omega.coeffs().iter().fold(1.0_f64, |m, c| m.max(c.norm()));
    let mean = omega.coeff(0, 0).norm();
    if mean > MEAN_TOLERANCE * scale {
        return Err(Error::NonzeroMean(mean));
    }
    Ok(())
}

/// Streamfunction `ψ` with `-Δψ = ω`.
pub fn solve_poisson(omega: &SpectralField) -> Result<SpectralField> {
    check_zero_mean(omega)?;
    let mut psi = omega.map_modes(|kx, ky| {
        let k2 = (kx * kx + ky * ky) as f64;
        if k2 == 0.0 {
            ZERO
        } else {
            Complex64::new(1.0 / k2, 0.0)
        }
    });
    psi.remove_mean();
    Ok(psi)
}

/// `-Δ` as the multiplier `|k|²`.
pub fn neg_laplacian(field: &SpectralField) -> SpectralField {
    field.map_modes(|kx, ky| Complex64::new((kx * kx + ky * ky) as f64, 0.0))
}

/// `∂x` and `∂y` as spectral multipliers.
pub fn gradient(field: &SpectralField) -> (SpectralField, SpectralField) {
    (
        field.map_modes(|kx, _| I * kx as f64),
        field.map_modes(|_, ky| I * ky as f64),
    )
}

/// Velocity `u = ∇⊥ψ = (∂yψ, -∂xψ)` with `-Δψ = ω`.
pub fn velocity_from_vorticity(omega: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let psi = solve_poisson(omega)?;
    Ok((
        psi.map_modes(|_, ky| I * ky as f64),
        psi.map_modes(|kx, _| -I * kx as f64),
    ))
}

/// Dealiased `u·∇ω` with `u` recovered from `ω`; the product is formed on the nodes.
pub fn nonlinear_term(omega: &SpectralField) -> Result<SpectralField> {
    check_zero_mean(omega)?;
    Ok(advection(omega))
}

/// [`nonlinear_term`] without the mean check, for the time-stepping hot path.
pub(crate) fn advection(omega: &SpectralField) -> SpectralField {
    let grid = omega.grid();
    let len = grid.len();
    let t = tables(grid);
    // Two real fields per complex FFT: (u + i·v) and (∂xω + i·∂yω).
    let mut vel = vec![ZERO; len];
    GRAD_BUFFER.with(|cell| {
        let mut grad = cell.borrow_mut();
        grad.clear();
        grad.resize(len, ZERO);
        advection_into(omega, &t, &mut vel, &mut grad);
    });
    let mut out = SpectralField::from_coeffs(grid, vel).expect("sized by grid");
    out.symmetrize();
    out
}

thread_local! {
    static GRAD_BUFFER: std::cell::RefCell<Vec<Complex64>> = const { std::cell::RefCell::new(Vec::new()) };
}

fn advection_into(omega: &SpectralField, t: &crate::transform::Plan, vel: &mut [Complex64], grad: &mut [Complex64]) {
    let grid = omega.grid();
    let len = grid.len();
    let w = omega.coeffs();
    for i in 0..len {
        if !t.resolved[i] {
            continue;
        }
        let (kx, ky) = (t.kx[i], t.ky[i]);
        let psi = w[i] * t.inv_k2[i];
        let (u, v) = (I * ky * psi, -I * kx * psi);
        let (gx, gy) = (I * kx * w[i], I * ky * w[i]);
        vel[i] = u + I * v;
        grad[i] = gx + I * gy;
    }
    fft2_inverse(grid, vel);
    fft2_inverse(grid, grad);
    for (p, g) in vel.iter_mut().zip(grad.iter()) {
        *p = Complex64::new(p.re * g.re + p.im * g.im, 0.0);
    }
    fft2_forward(grid, vel);
    for (i, c) in vel.iter_mut().enumerate() {
        if !t.resolved[i] {
            *c = ZERO;
        }
    }
    vel[0] = ZERO;
}
