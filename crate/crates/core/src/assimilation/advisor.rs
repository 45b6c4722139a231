//! Parameter relations from the approximate-synchronization argument.
//!
//! `C`, `C_Ω` and `c₀` are not known in closed form; callers supply them,
//! typically `C_Ω` from [`crate::inequality::fit_spectral_constant`] and `c₀`
//! from [`crate::inequality::verify_approx_inequality`].

use crate::error::{Error, Result};
use crate::grid::LAMBDA1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Advice {
    /// `μ = 2Cνλ1G²C_Ω e^{C_Ω√N}`
    pub mu: f64,
    /// `h_* = sqrt(ν/(4Cμc₀))`
    pub h_star: f64,
    /// Analyticity radius the solution must exceed, `σ_* ≈ C_Ω`.
    pub sigma_star: f64,
    /// `ε̄ = ενλ1/8`, the per-step tolerance the spectral cutoff must beat.
    pub eps_bar: f64,
}

pub fn advise_parameters(
    nu: f64,
    grashof: f64,
    (c, c_omega): (f64, f64),
    n_modes: f64,
    epsilon: f64,
    c0: f64,
) -> Result<Advice> {
    for (name, v) in [
        ("nu", nu),
        ("G", grashof),
        ("C", c),
        ("C_Omega", c_omega),
        ("epsilon", epsilon),
        ("c0", c0),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if !(n_modes >= 0.0) {
        return Err(Error::InvalidParameter(format!("N must be >= 0, got {n_modes}")));
    }
    let exponent = c_omega * n_modes.sqrt();
    let growth = exponent.exp();
    let mu = 2.0 * c * nu * LAMBDA1 * grashof * grashof * c_omega * growth;
    if !mu.is_finite() {
        return Err(Error::Overflow(exponent));
    }
    Ok(Advice {
        mu,
        h_star: (nu / (4.0 * c * mu * c0)).sqrt(),
        sigma_star: c_omega,
        eps_bar: epsilon * nu * LAMBDA1 / 8.0,
    })
}
