//! Twin experiments: a reference run observed by a nudged copy started from zero.

use super::metrics::{error_metrics, ErrorRow, ErrorSeries};
use super::{nudged_step, NudgingParams};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mask::Mask;
use crate::observation::mask_at;
use crate::solver::{Integrator, SolverConfig, SolverState};

/// Receives output as a twin experiment runs; rows already delivered survive
/// an abort.
pub trait TwinSink {
    fn row(&mut self, _row: &ErrorRow) -> Result<()> {
        Ok(())
    }

    /// Fields at a requested snapshot time (elapsed since the start).
    fn snapshot(&mut self, _t: f64, _reference: &SpectralField, _assim: &SpectralField) -> Result<()> {
        Ok(())
    }

    /// Observation mask in force at `t`: once for static domains, at every
    /// sample for mobile ones.
    fn mask(&mut self, _t: f64, _mask: &Mask) -> Result<()> {
        Ok(())
    }
}

pub struct NullSink;

impl TwinSink for NullSink {}

#[derive(Clone, Debug)]
pub struct TwinExperiment {
    pub config: SolverConfig,
    pub reference: SolverState,
    pub nudging: NudgingParams,
    pub horizon: f64,
    /// Time between error rows.
    pub sample_interval: f64,
    /// Extra regions for the per-region relative L² error.
    pub regions: Vec<Mask>,
    pub snapshot_times: Vec<f64>,
    /// End early once the global relative L² error drops below this value.
    pub stop_below: Option<f64>,
}

impl TwinExperiment {
    pub fn new(config: SolverConfig, reference: SolverState, nudging: NudgingParams, horizon: f64) -> Self {
        Self {
            config,
            reference,
            nudging,
            horizon,
            sample_interval: 1.0,
            regions: Vec::new(),
            snapshot_times: Vec::new(),
            stop_below: None,
        }
    }
}

/// Runs the experiment with a freshly built integrator.
pub fn run_twin(exp: &TwinExperiment, sink: &mut dyn TwinSink) -> Result<ErrorSeries> {
    let integrator = Integrator::from_config(&exp.config)?;
    run_twin_with(exp, &integrator, sink)
}

/// [`run_twin`] with a caller-supplied integrator (reuses forcing and factors).
pub fn run_twin_with(exp: &TwinExperiment, integrator: &Integrator, sink: &mut dyn TwinSink) -> Result<ErrorSeries> {
    let config = integrator.config();
    let grid = config.grid;
    exp.nudging.validate(integrator)?;
    if !(exp.horizon >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be >= 0, got {}",
            exp.horizon
        )));
    }
    if !(exp.sample_interval > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sample interval must be positive, got {}",
            exp.sample_interval
        )));
    }
    if exp.reference.omega().grid() != grid {
        return Err(Error::GridMismatch(exp.reference.omega().grid().n(), grid.n()));
    }
    if let Some(m) = exp.regions.iter().find(|m| m.grid() != grid) {
        return Err(Error::GridMismatch(m.grid().n(), grid.n()));
    }

    let mut reference = exp.reference.clone();
    let t0 = reference.time();
    let mut assim = SolverState::new(SpectralField::zeros(grid), t0);
    let steps = config.steps_for(exp.horizon);
    let every = config.steps_for(exp.sample_interval).max(1);
    let snapshot_steps: Vec<u64> = exp.snapshot_times.iter().map(|&t| config.steps_for(t)).collect();
    let mobile = exp.nudging.observation.subdomain.is_time_dependent();
    let mut series = ErrorSeries::default();

    let mut record = |s: u64, reference: &SolverState, assim: &SolverState, sink: &mut dyn TwinSink| -> Result<bool> {
        let elapsed = s as f64 * config.dt;
        if snapshot_steps.contains(&s) {
            sink.snapshot(elapsed, reference.omega(), assim.omega())?;
        }
        if s % every != 0 && s != steps {
            return Ok(false);
        }
        if mobile || s == 0 {
            sink.mask(
                elapsed,
                &mask_at(&exp.nudging.observation.subdomain, grid, reference.time()),
            )?;
        }
        let mut row = error_metrics(reference.omega(), assim.omega(), &exp.regions)?;
        row.time = elapsed;
        sink.row(&row)?;
        let done = exp.stop_below.is_some_and(|thr| row.rel_l2 < thr);
        series.rows.push(row);
        Ok(done)
    };

    if record(0, &reference, &assim, sink)? {
        return Ok(series);
    }
    for s in 1..=steps {
        nudged_step(&mut reference, &mut assim, &exp.nudging, integrator)?;
        if record(s, &reference, &assim, sink)? {
            break;
        }
    }
    Ok(series)
}
