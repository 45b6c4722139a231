//! Third-order Adams–Bashforth with an exact integrating factor for `-νΔ`.
//!
//! Per mode, with `E = exp(-ν|k|²Δt)` and `R_j` the explicit right-hand side
//! `j` steps ago,
//!
//! ```text
//! ω ← E·ω + Δt·(β0·E·R0 + β1·E²·R1 + β2·E³·R2),   β = (23, -16, 5)/12.
//! ```
//!
//! History holds the raw `R_j`; the factors are applied at use time so a
//! restored checkpoint continues exactly.

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::ops::advection;
use num_complex::Complex64;
use std::collections::VecDeque;

const AB3: [f64; 3] = [23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0];
const AB2: [f64; 2] = [1.5, -0.5];

/// How the first two steps are taken before AB3 has a full history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Bootstrap {
    /// Integrating-factor SSP-RK3 for steps 1 and 2 (three RHS evaluations each).
    #[default]
    Rk3,
    /// Forward Euler then AB2; no extra RHS evaluations but first-order start.
    EulerAb2,
}

impl Bootstrap {
    pub fn name(&self) -> &'static str {
        match self {
            Bootstrap::Rk3 => "rk3",
            Bootstrap::EulerAb2 => "euler",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rk3" => Some(Bootstrap::Rk3),
            "euler" | "euler-ab2" => Some(Bootstrap::EulerAb2),
            _ => None,
        }
    }
}

/// Vorticity spectrum, explicit-RHS history (newest first), and clock.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub(crate) omega: SpectralField,
    pub(crate) history: VecDeque<SpectralField>,
    pub(crate) time: f64,
    pub(crate) step_count: u64,
}

impl SolverState {
    /// Fresh state with empty history.
    pub fn new(omega: SpectralField, time: f64) -> Self {
        let mut omega = omega;
        omega.remove_mean();
        Self {
            omega,
            history: VecDeque::with_capacity(2),
            time,
            step_count: 0,
        }
    }

    pub fn zero(config: &SolverConfig) -> Self {
        Self::new(SpectralField::zeros(config.grid), 0.0)
    }

    /// Rebuilds a state from its parts; `history` is newest first, at most two entries.
    pub fn from_parts(omega: SpectralField, history: Vec<SpectralField>, time: f64, step_count: u64) -> Result<Self> {
        if history.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "history holds at most 2 entries, got {}",
                history.len()
            )));
        }
        Ok(Self {
            omega,
            history: history.into(),
            time,
            step_count,
        })
    }

    #[inline]
    pub fn omega(&self) -> &SpectralField {
        &self.omega
    }

    /// Explicit right-hand sides from previous steps, newest first.
    pub fn history(&self) -> impl Iterator<Item = &SpectralField> {
        self.history.iter()
    }

    #[inline]
    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    #[inline]
    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Replaces the vorticity and drops the history (the scheme restarts).
    pub fn reset_omega(&mut self, omega: SpectralField) {
        self.omega = omega;
        self.omega.remove_mean();
        self.history.clear();
    }
}

/// Explicit part of the vorticity equation: `-u·∇ω + f`, dealiased.
pub fn rhs_explicit(state: &SolverState, forcing: &SpectralField) -> SpectralField {
    rhs_of(&state.omega, forcing)
}

pub(crate) fn rhs_of(omega: &SpectralField, forcing: &SpectralField) -> SpectralField {
    advection(omega).axpy(-1.0, forcing)
}

/// Precomputed per-mode exponentials for one `(grid, ν, Δt)`.
#[derive(Clone, Debug)]
pub struct Integrator {
    config: SolverConfig,
    forcing: SpectralField,
    e1: Vec<f64>,
    e2: Vec<f64>,
    e3: Vec<f64>,
    e_half: Vec<f64>,
    e_inv: Vec<f64>,
    e_inv_half: Vec<f64>,
}

impl Integrator {
    pub fn new(config: &SolverConfig, forcing: SpectralField) -> Result<Self> {
        config.validate()?;
        if forcing.grid() != config.grid {
            return Err(Error::GridMismatch(forcing.grid().n(), config.grid.n()));
        }
        let a: Vec<f64> = config
            .grid
            .k_squared()
            .into_iter()
            .map(|k2| -config.nu * k2 * config.dt)
            .collect();
        let e = |s: f64| a.iter().map(|x| (s * x).exp()).collect::<Vec<_>>();
        Ok(Self {
            config: config.clone(),
            forcing,
            e1: e(1.0),
            e2: e(2.0),
            e3: e(3.0),
            e_half: e(0.5),
            e_inv: e(-1.0),
            e_inv_half: e(-0.5),
        })
    }

    /// Builds the forcing from the config and precomputes factors.
    pub fn from_config(config: &SolverConfig) -> Result<Self> {
        let forcing = super::build_forcing(&config.forcing, config.grid)?;
        Self::new(config, forcing)
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn forcing(&self) -> &SpectralField {
        &self.forcing
    }

    /// Advances one step of the plain Navier–Stokes system.
    pub fn step(&self, state: &mut SolverState) -> Result<()> {
        let forcing = &self.forcing;
        self.advance(state, |w, _| rhs_of(w, forcing))
    }

    /// Advances one step with a caller-supplied explicit right-hand side
    /// `rhs(ω, t)`. Bootstrap stages call it at intermediate states.
    pub fn advance<F>(&self, state: &mut SolverState, mut rhs: F) -> Result<()>
    where
        F: FnMut(&SpectralField, f64) -> SpectralField,
    {
        let dt = self.config.dt;
        let t = state.time;
        let r0 = rhs(&state.omega, t);
        let mut next = match (state.history.len(), self.config.bootstrap) {
            (2, _) => self.ab3(&state.omega, &r0, &state.history[0], &state.history[1]),
            (1, Bootstrap::EulerAb2) => self.ab2(&state.omega, &r0, &state.history[0]),
            (0, Bootstrap::EulerAb2) => self.euler(&state.omega, &r0),
            (_, Bootstrap::Rk3) => self.rk3(&state.omega, &r0, t, &mut rhs),
            _ => unreachable!("history holds at most two entries"),
        };
        next.remove_mean();
        if !next.is_finite() {
            return Err(Error::BlowUp {
                step: state.step_count + 1,
                time: t + dt,
            });
        }
        state.omega = next;
        state.history.push_front(r0);
        state.history.truncate(2);
        state.time = t + dt;
        state.step_count += 1;
        Ok(())
    }

    fn combine(&self, f: impl Fn(usize) -> Complex64, grid_len: usize) -> SpectralField {
        let coeffs = (0..grid_len).map(f).collect();
        SpectralField::from_coeffs(self.config.grid, coeffs).expect("sized by grid")
    }

    fn ab3(&self, w: &SpectralField, r0: &SpectralField, r1: &SpectralField, r2: &SpectralField) -> SpectralField {
        let dt = self.config.dt;
        let (w, r0, r1, r2) = (w.coeffs(), r0.coeffs(), r1.coeffs(), r2.coeffs());
        self.combine(
            |i| {
                self.e1[i] * w[i]
                    + dt * (AB3[0] * self.e1[i] * r0[i] + AB3[1] * self.e2[i] * r1[i] + AB3[2] * self.e3[i] * r2[i])
            },
            w.len(),
        )
    }

    fn ab2(&self, w: &SpectralField, r0: &SpectralField, r1: &SpectralField) -> SpectralField {
        let dt = self.config.dt;
        let (w, r0, r1) = (w.coeffs(), r0.coeffs(), r1.coeffs());
        self.combine(
            |i| self.e1[i] * w[i] + dt * (AB2[0] * self.e1[i] * r0[i] + AB2[1] * self.e2[i] * r1[i]),
            w.len(),
        )
    }

    fn euler(&self, w: &SpectralField, r0: &SpectralField) -> SpectralField {
        let dt = self.config.dt;
        let (w, r0) = (w.coeffs(), r0.coeffs());
        self.combine(|i| self.e1[i] * (w[i] + dt * r0[i]), w.len())
    }

    /// SSP-RK3 applied to `e^{νΔ(t - tₙ)}`-transformed vorticity.
    fn rk3<F>(&self, w: &SpectralField, r0: &SpectralField, t: f64, rhs: &mut F) -> SpectralField
    where
        F: FnMut(&SpectralField, f64) -> SpectralField,
    {
        let dt = self.config.dt;
        let len = w.coeffs().len();
        let wc = w.coeffs();
        // Stage variables live in the transformed frame; skip zero RHS so that
        // E⁻¹ on dealiased modes never meets 0·∞.
        let scaled = |e: &[f64], r: &[Complex64], i: usize| {
            if r[i] == Complex64::new(0.0, 0.0) {
                r[i]
            } else {
                e[i] * r[i]
            }
        };

        let r0c = r0.coeffs();
        let v1: Vec<Complex64> = (0..len).map(|i| wc[i] + dt * r0c[i]).collect();
        let stage1 = self.combine(|i| self.e1[i] * v1[i], len);

        let r1 = rhs(&stage1, t + dt);
        let r1c = r1.coeffs();
        let v2: Vec<Complex64> = (0..len)
            .map(|i| 0.75 * wc[i] + 0.25 * (v1[i] + dt * scaled(&self.e_inv, r1c, i)))
            .collect();
        let stage2 = self.combine(|i| self.e_half[i] * v2[i], len);

        let r2 = rhs(&stage2, t + 0.5 * dt);
        let r2c = r2.coeffs();
        self.combine(
            |i| {
                let v3 = wc[i] / 3.0 + (2.0 / 3.0) * (v2[i] + dt * scaled(&self.e_inv_half, r2c, i));
                self.e1[i] * v3
            },
            len,
        )
    }
}

/// One step of the plain system; builds the integrating factors on every call.
/// Use [`Integrator`] in loops.
pub fn step(state: &SolverState, config: &SolverConfig, forcing: &SpectralField) -> Result<SolverState> {
    let integrator = Integrator::new(config, forcing.clone())?;
    let mut next = state.clone();
    integrator.step(&mut next)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::solver::{ForcingSpec, SolverConfig};
    use crate::transform::forward;
    use crate::PhysicalField;

    fn config(n: usize, nu: f64, dt: f64) -> SolverConfig {
        SolverConfig {
            grid: Grid::new(n).unwrap(),
            nu,
            dt,
            forcing: ForcingSpec {
                band_lo: 2,
                band_hi: 3,
                nu,
                ..ForcingSpec::default()
            },
            gevrey_sigma: 0.0,
            bootstrap: Bootstrap::default(),
        }
    }

    fn single_mode(g: Grid, kx: i64, ky: i64, a: Complex64) -> SpectralField {
        let mut w = SpectralField::zeros(g);
        w.set_mode(kx, ky, a);
        w
    }

    fn smooth_state(g: Grid) -> SpectralField {
        let mut w = forward(&PhysicalField::from_fn(g, |x, y| {
            (x + 2.0 * y).sin() + 0.7 * (3.0 * x - y).cos() + 0.4 * (2.0 * x).sin() * y.cos()
        }));
        w.remove_mean();
        w
    }

    #[test]
    fn pure_diffusion_is_exact() {
        for bootstrap in [Bootstrap::Rk3, Bootstrap::EulerAb2] {
            let mut cfg = config(16, 0.05, 0.01);
            cfg.bootstrap = bootstrap;
            let g = cfg.grid;
            let a = Complex64::new(0.3, -0.8);
            let it = Integrator::new(&cfg, SpectralField::zeros(g)).unwrap();
            let mut s = SolverState::new(single_mode(g, 2, 1, a), 0.0);
            for step in 1..=200 {
                it.step(&mut s).unwrap();
                let expected = a * (-cfg.nu * 5.0 * step as f64 * cfg.dt).exp();
                assert!((s.omega().coeff(2, 1) - expected).norm() <= 1e-13 * expected.norm());
            }
        }
    }

    #[test]
    fn forced_mode_follows_linear_ode() {
        let cfg = config(16, 0.1, 0.01);
        let g = cfg.grid;
        let fhat = Complex64::new(0.0, 0.5);
        let it = Integrator::new(&cfg, single_mode(g, 1, 0, fhat)).unwrap();
        let mut s = SolverState::zero(&cfg);
        let rate = cfg.nu;
        for _ in 0..10_000 {
            it.step(&mut s).unwrap();
            let exact = fhat / rate * (1.0 - (-rate * s.time()).exp());
            assert!((s.omega().coeff(1, 0) - exact).norm() < 1e-8 * (fhat / rate).norm());
        }
    }

    #[test]
    fn unforced_enstrophy_never_increases() {
        let cfg = config(32, 0.01, 0.01);
        let g = cfg.grid;
        let it = Integrator::new(&cfg, SpectralField::zeros(g)).unwrap();
        let mut s = SolverState::new(smooth_state(g), 0.0);
        let mut last = s.omega().l2_norm().powi(2);
        for _ in 0..300 {
            it.step(&mut s).unwrap();
            let z = s.omega().l2_norm().powi(2);
            assert!(z <= last * (1.0 + 1e-12), "{z} > {last}");
            assert!(s.omega().hermitian_defect() < 1e-13);
            assert_eq!(s.omega().mean(), 0.0);
            last = z;
        }
    }

    #[test]
    fn history_ramps_to_two() {
        let cfg = config(16, 0.01, 0.01);
        let it = Integrator::from_config(&cfg).unwrap();
        let mut s = SolverState::zero(&cfg);
        let lens: Vec<usize> = (0..4)
            .map(|_| {
                it.step(&mut s).unwrap();
                s.history_len()
            })
            .collect();
        assert_eq!(lens, [1, 2, 2, 2]);
        assert_eq!(s.step_count(), 4);
        assert!((s.time() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn rhs_identities() {
        let cfg = config(32, 0.01, 0.01);
        let g = cfg.grid;
        let f = crate::solver::build_forcing(&cfg.forcing, g).unwrap();
        let zero = SolverState::zero(&cfg);
        assert_eq!(rhs_explicit(&zero, &f), f);
        let tg = forward(&PhysicalField::from_fn(g, |x, y| 2.0 * x.sin() * y.sin()));
        let r = rhs_explicit(&SolverState::new(tg, 0.0), &SpectralField::zeros(g));
        assert!(r.coeffs().iter().all(|c| c.norm() < 1e-13));
        let w = smooth_state(g);
        let r = rhs_explicit(&SolverState::new(w.clone(), 0.0), &SpectralField::zeros(g));
        assert!(r.inner(&w).abs() < 1e-10 * r.l2_norm() * w.l2_norm());
    }

    #[test]
    fn blow_up_reports_step() {
        let mut cfg = config(16, 1e-3, 10.0);
        cfg.forcing.grashof = 1e12;
        let it = Integrator::from_config(&cfg).unwrap();
        let mut s = SolverState::new(smooth_state(cfg.grid).scaled(1e3), 0.0);
        let err = (0..200).find_map(|_| it.step(&mut s).err()).expect("must blow up");
        assert!(matches!(err, Error::BlowUp { step, .. } if step >= 1));
    }

    #[test]
    fn free_step_matches_integrator() {
        let cfg = config(16, 0.01, 0.01);
        let it = Integrator::from_config(&cfg).unwrap();
        let mut a = SolverState::new(smooth_state(cfg.grid), 0.0);
        let b = step(&a, &cfg, it.forcing()).unwrap();
        it.step(&mut a).unwrap();
        assert_eq!(a, b);
        assert_eq!(Bootstrap::parse("euler-ab2"), Some(Bootstrap::EulerAb2));
        assert_eq!(Bootstrap::parse(Bootstrap::Rk3.name()), Some(Bootstrap::Rk3));
    }
}
