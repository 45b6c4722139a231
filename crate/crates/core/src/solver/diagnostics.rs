use super::SolverState;
use crate::error::{Error, Result};
use crate::field::SpectralField;

pub const DIAGNOSTICS_CSV_HEADER: &str = "t,energy,enstrophy,palinstrophy,gevrey";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub time: f64,
    /// `½‖u‖²`
    pub energy: f64,
    /// `‖ω‖²`
    pub enstrophy: f64,
    /// `‖∇ω‖²`
    pub palinstrophy: f64,
    /// `|A^{1/2} e^{σA^{1/2}} u|`
    pub gevrey: f64,
}

impl Diagnostics {
    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e}",
            self.time, self.energy, self.enstrophy, self.palinstrophy, self.gevrey
        )
    }
}

pub fn diagnostics(state: &SolverState, sigma: f64) -> Result<Diagnostics> {
    let mut d = field_diagnostics(state.omega(), sigma)?;
    d.time = state.time();
    Ok(d)
}

/// Spectral sums; `|û_k|² = |ω̂_k|²/|k|²` for the velocity.
pub(crate) fn field_diagnostics(omega: &SpectralField, sigma: f64) -> Result<Diagnostics> {
    let grid = omega.grid();
    let area = grid.length() * grid.length();
    let (mut energy, mut enstrophy, mut palinstrophy, mut gevrey) = (0.0, 0.0, 0.0, 0.0);
    for (i, c) in omega.coeffs().iter().enumerate() {
        let (kx, ky) = grid.mode(i);
        let k2 = (kx * kx + ky * ky) as f64;
        if k2 == 0.0 {
            continue;
        }
        let w2 = c.norm_sqr();
        energy += w2 / k2;
        enstrophy += w2;
        palinstrophy += w2 * k2;
        if w2 > 0.0 {
            let weight = (2.0 * sigma * k2.sqrt()).exp();
            let term = weight * w2;
            if !term.is_finite() {
                return Err(Error::GevreyOverflow(k2.sqrt()));
            }
            gevrey += term;
        }
    }
    if !gevrey.is_finite() {
        return Err(Error::GevreyOverflow(grid.dealias_cutoff() as f64));
    }
    Ok(Diagnostics {
        time: 0.0,
        energy: 0.5 * area * energy,
        enstrophy: area * enstrophy,
        palinstrophy: area * palinstrophy,
        gevrey: (area * gevrey).sqrt(),
    })
}
