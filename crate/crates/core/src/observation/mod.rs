//! Observation operators: where data is taken, how it is coarsened and
//! smoothed, and the composed map `J = FFT ∘ χΩ ∘ K_p ∘ FFT⁻¹`.

mod interp;
mod subdomain;

pub use interp::{
    nodal_interpolant, smoother_kp, spacing, spectral_project, subsample, volume_average_interpolant, CoarseLattice,
};
pub use subdomain::{
    mask_at, mobile_mask, trajectory_quarter, trajectory_sixteenth, MobilePath, QuarterLoop, SixteenthSerpentine,
    SubdomainSpec, Trajectory,
};

use crate::error::{Error, Result};
use crate::field::{PhysicalField, SpectralField};
use crate::grid::Grid;
use crate::mask::Mask;
use crate::transform::{forward, inverse_unchecked};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interpolant {
    /// Stride-`2^p` samples refined by `K_p`.
    #[default]
    NodalSmooth,
    /// Cell averages of `f·χΩ` over cells of side `h`.
    VolumeAverage,
}

impl Interpolant {
    pub fn name(&self) -> &'static str {
        match self {
            Interpolant::NodalSmooth => "nodal_smooth",
            Interpolant::VolumeAverage => "volume_average",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nodal_smooth" => Some(Interpolant::NodalSmooth),
            "volume_average" => Some(Interpolant::VolumeAverage),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObservationConfig {
    pub subdomain: SubdomainSpec,
    /// Data at every `2^stride_p`-th node per direction.
    pub stride_p: u32,
    pub interpolant: Interpolant,
    /// Keep only `max(|kx|, |ky|) ≤ K` after observation.
    pub spectral_cutoff: Option<u32>,
}

impl ObservationConfig {
    pub fn full() -> Self {
        Self {
            subdomain: SubdomainSpec::Full,
            stride_p: 0,
            interpolant: Interpolant::default(),
            spectral_cutoff: None,
        }
    }

    pub fn new(subdomain: SubdomainSpec, stride_p: u32) -> Self {
        Self {
            subdomain,
            stride_p,
            ..Self::full()
        }
    }

    pub fn validate(&self, grid: Grid) -> Result<()> {
        self.subdomain.validate()?;
        let n = grid.n();
        if self.stride_p >= usize::BITS || n % (1usize << self.stride_p) != 0 {
            return Err(Error::StrideMismatch { p: self.stride_p, n });
        }
        if self.spectral_cutoff == Some(0) {
            return Err(Error::InvalidParameter("spectral cutoff must be >= 1".into()));
        }
        Ok(())
    }

    /// `h = L·2^p/n`.
    pub fn spacing(&self, grid: Grid) -> f64 {
        spacing(grid, self.stride_p)
    }
}

/// Applies the interpolant and `χΩ` to a nodal field.
pub fn observe_physical(field: &PhysicalField, config: &ObservationConfig, mask: &Mask) -> Result<PhysicalField> {
    match config.interpolant {
        Interpolant::NodalSmooth => {
            let smooth = smoother_kp(&subsample(field, config.stride_p)?);
            Ok(smooth.masked(mask))
        }
        Interpolant::VolumeAverage => volume_average_interpolant(field, config.stride_p, mask),
    }
}

/// `J(difference)` at time `t`.
pub fn observe(difference: &SpectralField, config: &ObservationConfig, t: f64) -> Result<SpectralField> {
    let grid = difference.grid();
    config.validate(grid)?;
    let mask = mask_at(&config.subdomain, grid, t);
    observe_with_mask(difference, config, &mask)
}

/// [`observe`] with a precomputed mask.
pub fn observe_with_mask(difference: &SpectralField, config: &ObservationConfig, mask: &Mask) -> Result<SpectralField> {
    let mut out = if config.stride_p == 0 && mask.is_full() {
        // Every factor is the identity.
        difference.clone()
    } else {
        let physical = inverse_unchecked(difference);
        forward(&observe_physical(&physical, config, mask)?)
    };
    if let Some(k) = config.spectral_cutoff {
        out = spectral_project(&out, k)?;
    }
    Ok(out)
}
