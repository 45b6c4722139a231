//! Vorticity-form Navier–Stokes integration and flow diagnostics.

mod checkpoint;
mod diagnostics;
mod forcing;
mod stepper;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use diagnostics::{diagnostics, Diagnostics, DIAGNOSTICS_CSV_HEADER};
pub use forcing::{build_forcing, grashof, velocity_forcing_norm, ForcingSpec};
pub(crate) use stepper::rhs_of;
pub use stepper::{rhs_explicit, step, Bootstrap, Integrator, SolverState};

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    pub nu: f64,
    pub dt: f64,
    pub forcing: ForcingSpec,
    pub gevrey_sigma: f64,
    pub bootstrap: Bootstrap,
}

impl SolverConfig {
    /// Laptop-scale chaotic regime: n = 128, ν = 1e-3, G = 5·10⁴, Δt = 0.01.
    pub fn desk() -> Self {
        let nu = 1e-3;
        Self {
            grid: Grid::new(128).expect("128 is a valid grid"),
            nu,
            dt: 0.01,
            forcing: ForcingSpec {
                nu,
                ..ForcingSpec::default()
            },
            gevrey_sigma: 0.0,
            bootstrap: Bootstrap::default(),
        }
    }

    /// Full-scale regime: n = 512, ν = 1e-4, G = 10⁶, Δt = 0.01.
    pub fn full_scale() -> Self {
        let nu = 1e-4;
        Self {
            grid: Grid::new(512).expect("512 is a valid grid"),
            nu,
            dt: 0.01,
            forcing: ForcingSpec {
                nu,
                grashof: 1e6,
                ..ForcingSpec::default()
            },
            gevrey_sigma: 0.0,
            bootstrap: Bootstrap::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {}", self.nu)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.gevrey_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gevrey sigma must be non-negative, got {}",
                self.gevrey_sigma
            )));
        }
        if self.forcing.nu != self.nu {
            return Err(Error::InvalidParameter(format!(
                "forcing nu {} differs from solver nu {}",
                self.forcing.nu, self.nu
            )));
        }
        Ok(())
    }

    /// Number of whole steps covering `duration`.
    pub fn steps_for(&self, duration: f64) -> u64 {
        (duration / self.dt).round().max(0.0) as u64
    }
}

/// Integrates from `state` for `duration`, calling `on_sample` with the state
/// and its diagnostics every `sample_every` steps (and at the start and the end).
pub fn integrate(
    integrator: &Integrator,
    state: &mut SolverState,
    duration: f64,
    sample_every: u64,
    mut on_sample: impl FnMut(&SolverState, &Diagnostics) -> Result<()>,
) -> Result<()> {
    let config = integrator.config();
    let steps = config.steps_for(duration);
    let every = sample_every.max(1);
    on_sample(state, &diagnostics(state, config.gevrey_sigma)?)?;
    for s in 1..=steps {
        integrator.step(state)?;
        if s % every == 0 || s == steps {
            on_sample(state, &diagnostics(state, config.gevrey_sigma)?)?;
        }
    }
    Ok(())
}

/// Evolves the forced system from rest for `duration` time units.
pub fn spinup(
    config: &SolverConfig,
    duration: f64,
    sample_every: u64,
    on_sample: impl FnMut(&SolverState, &Diagnostics) -> Result<()>,
) -> Result<SolverState> {
    if !(duration >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "duration must be >= 0, got {duration}"
        )));
    }
    let integrator = Integrator::from_config(config)?;
    let mut state = SolverState::zero(config);
    integrate(&integrator, &mut state, duration, sample_every, on_sample)?;
    Ok(state)
}
