//! The nudged solver, twin experiments, error metrics and parameter advice.

mod advisor;
mod metrics;
mod twin;

pub use advisor::{advise_parameters, Advice};
pub use metrics::{error_metrics, fit_rate, linear_fit, ErrorRow, ErrorSeries};
pub use twin::{run_twin, run_twin_with, NullSink, TwinExperiment, TwinSink};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mask::Mask;
use crate::observation::{mask_at, observe_with_mask, ObservationConfig};
use crate::ops::dealias_in_place;
use crate::solver::{Integrator, SolverState};

#[derive(Clone, Debug, PartialEq)]
pub struct NudgingParams {
    pub mu: f64,
    pub observation: ObservationConfig,
}

impl NudgingParams {
    pub fn new(mu: f64, observation: ObservationConfig) -> Self {
        Self { mu, observation }
    }

    pub fn validate(&self, integrator: &Integrator) -> Result<()> {
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be >= 0, got {}", self.mu)));
        }
        self.observation.validate(integrator.config().grid)
    }
}

/// Advances the reference and the assimilated state by one step.
///
/// The assimilated right-hand side is `rhs(ω̃) − μ·J(ω̃ − ω)`. The mask is
/// taken at the step's start time. Intermediate bootstrap stages see the
/// reference at the matching stage when the reference computed one, and the
/// linear interpolant between `ωₙ` and `ωₙ₊₁` otherwise.
pub fn nudged_step(
    reference: &mut SolverState,
    assim: &mut SolverState,
    params: &NudgingParams,
    integrator: &Integrator,
) -> Result<()> {
    if reference.time() != assim.time() {
        return Err(Error::ClockMismatch {
            reference: reference.time(),
            assimilated: assim.time(),
        });
    }
    let grid = integrator.config().grid;
    if reference.omega().grid() != grid || assim.omega().grid() != grid {
        return Err(Error::GridMismatch(
            reference.omega().grid().n(),
            assim.omega().grid().n(),
        ));
    }
    let forcing = integrator.forcing();
    if params.mu == 0.0 {
        integrator.step(reference)?;
        return integrator.step(assim);
    }

    let t = reference.time();
    let dt = integrator.config().dt;
    let start = reference.omega().clone();
    let mut stages: Vec<(f64, SpectralField)> = Vec::with_capacity(3);
    integrator.advance(reference, |w, s| {
        stages.push((s, w.clone()));
        crate::solver::rhs_of(w, forcing)
    })?;
    let end = reference.omega();

    let mask = mask_at(&params.observation.subdomain, grid, t);
    let mut call = 0usize;
    let mut failure = None;
    integrator.advance(assim, |w, s| {
        let nudge_ref = match stages.get(call) {
            Some((rs, rw)) if *rs == s => rw.clone(),
            _ => {
                let theta = (s - t) / dt;
                start.scaled(1.0 - theta).add(&end.scaled(theta))
            }
        };
        call += 1;
        let rhs = crate::solver::rhs_of(w, forcing);
        match nudge(w, &nudge_ref, params, &mask) {
            Ok(j) => j.axpy(-params.mu, &rhs),
            Err(e) => {
                failure.get_or_insert(e);
                rhs
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// `J(ω̃ − ω)` restricted to the resolved modes the state lives on.
fn nudge(w: &SpectralField, reference: &SpectralField, params: &NudgingParams, mask: &Mask) -> Result<SpectralField> {
    let mut j = observe_with_mask(&w.sub(reference), &params.observation, mask)?;
    dealias_in_place(&mut j);
    Ok(j)
}
