//! Plain-Rust state behind the browser bindings. Everything here runs natively
//! too, which is how the tests exercise it.

use nudging::assimilation::{error_metrics, nudged_step, NudgingParams};
use nudging::inequality::fit_spectral_constant;
use nudging::observation::{mask_at, Interpolant, ObservationConfig, SubdomainSpec};
use nudging::solver::{ForcingSpec, Integrator, SolverConfig, SolverState};
use nudging::transform::inverse;
use nudging::{Grid, Mask, SpectralField};

/// Small enough to animate at interactive rates in a browser tab.
pub fn demo_config(seed: u64) -> SolverConfig {
    let nu = 2e-3;
    SolverConfig {
        grid: Grid::new(64).expect("64 is a valid grid"),
        nu,
        dt: 0.02,
        forcing: ForcingSpec {
            band_lo: 4,
            band_hi: 6,
            grashof: 2e4,
            nu,
            seed,
        },
        gevrey_sigma: 0.0,
        bootstrap: Default::default(),
    }
}

/// `full`, `quarter`, `sixteenth`, or a static area fraction such as `0.25`.
pub fn parse_subdomain(s: &str) -> Result<SubdomainSpec, String> {
    let spec = match s.trim() {
        "full" => SubdomainSpec::Full,
        "quarter" => SubdomainSpec::mobile_quarter(),
        "sixteenth" => SubdomainSpec::mobile_sixteenth(),
        other => {
            let f: f64 = other
                .parse()
                .map_err(|_| format!("unknown subdomain {other:?} (full, quarter, sixteenth or a fraction)"))?;
            SubdomainSpec::centered(f)
        }
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

pub fn parse_interpolant(s: &str) -> Result<Interpolant, String> {
    Interpolant::parse(s).ok_or_else(|| format!("unknown interpolant {s:?} (nodal_smooth, volume_average)"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Reference,
    Assimilated,
    Difference,
}

impl View {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "ref" => Ok(View::Reference),
            "assim" => Ok(View::Assimilated),
            "diff" => Ok(View::Difference),
            _ => Err(format!("unknown view {s:?} (ref, assim, diff)")),
        }
    }
}

pub struct Twin {
    integrator: Integrator,
    reference: SolverState,
    assim: Option<SolverState>,
    params: NudgingParams,
    elapsed: f64,
}

impl Twin {
    pub fn new(seed: u64) -> Result<Self, String> {
        let config = demo_config(seed);
        let integrator = Integrator::from_config(&config).map_err(|e| e.to_string())?;
        Ok(Self {
            reference: SolverState::zero(&config),
            integrator,
            assim: None,
            params: NudgingParams::new(0.0, ObservationConfig::full()),
            elapsed: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.integrator.config().grid.n()
    }

    pub fn time(&self) -> f64 {
        self.reference.time()
    }

    /// Time since assimilation started.
    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn is_assimilating(&self) -> bool {
        self.assim.is_some()
    }

    /// Starts (or restarts) a nudged copy from zero at the current time.
    pub fn start(&mut self, mu: f64, subdomain: &str, p: u32, interpolant: &str) -> Result<(), String> {
        let mut obs = ObservationConfig::new(parse_subdomain(subdomain)?, p);
        obs.interpolant = parse_interpolant(interpolant)?;
        let params = NudgingParams::new(mu, obs);
        params.validate(&self.integrator).map_err(|e| e.to_string())?;
        self.params = params;
        let grid = self.integrator.config().grid;
        self.assim = Some(SolverState::new(SpectralField::zeros(grid), self.reference.time()));
        self.elapsed = 0.0;
        Ok(())
    }

    pub fn stop(&mut self) {
        self.assim = None;
    }

    /// Advances `steps` steps; returns the relative L² error, or NaN before
    /// assimilation has started. A blow-up resets the run to rest.
    pub fn advance(&mut self, steps: u32) -> Result<f64, String> {
        let dt = self.integrator.config().dt;
        for _ in 0..steps {
            let r = match self.assim.as_mut() {
                Some(a) => nudged_step(&mut self.reference, a, &self.params, &self.integrator),
                None => self.integrator.step(&mut self.reference),
            };
            if let Err(e) = r {
                self.reference = SolverState::zero(self.integrator.config());
                self.assim = None;
                return Err(e.to_string());
            }
            if self.assim.is_some() {
                self.elapsed += dt;
            }
        }
        self.error()
    }

    pub fn error(&self) -> Result<f64, String> {
        match &self.assim {
            Some(a) => error_metrics(self.reference.omega(), a.omega(), &[])
                .map(|r| r.rel_l2)
                .map_err(|e| e.to_string()),
            None => Ok(f64::NAN),
        }
    }

    pub fn mask(&self) -> Mask {
        let grid = self.integrator.config().grid;
        if self.assim.is_none() {
            return Mask::empty(grid);
        }
        mask_at(&self.params.observation.subdomain, grid, self.reference.time())
    }

    /// Vorticity as RGBA, rows from the top (largest y) down.
    pub fn render(&self, view: View) -> Vec<u8> {
        let field = match (view, &self.assim) {
            (View::Reference, _) | (_, None) => self.reference.omega().clone(),
            (View::Assimilated, Some(a)) => a.omega().clone(),
            (View::Difference, Some(a)) => a.omega().sub(self.reference.omega()),
        };
        // The difference shares the reference's scale so convergence is visible.
        let scale = inverse(self.reference.omega()).map(|f| f.linf_norm()).unwrap_or(0.0);
        let values = inverse(&field).map(|f| f.into_values()).unwrap_or_default();
        rgba(&values, self.n(), scale, Some(&self.mask()))
    }
}

/// Blue–white–red map of `v / scale`; masked nodes are outlined in green.
pub fn rgba(values: &[f64], n: usize, scale: f64, mask: Option<&Mask>) -> Vec<u8> {
    let mut out = vec![0u8; 4 * n * n];
    let inv = if scale > 0.0 { 1.0 / scale } else { 0.0 };
    for row in 0..n {
        let iy = n - 1 - row;
        for ix in 0..n {
            let x = (values.get(iy * n + ix).copied().unwrap_or(0.0) * inv).clamp(-1.0, 1.0);
            let (r, g, b) = if x >= 0.0 {
                (255.0, 255.0 * (1.0 - x), 255.0 * (1.0 - x))
            } else {
                (255.0 * (1.0 + x), 255.0 * (1.0 + x), 255.0)
            };
            let px = &mut out[4 * (row * n + ix)..4 * (row * n + ix) + 4];
            px.copy_from_slice(&[r as u8, g as u8, b as u8, 255]);
            if let Some(m) = mask {
                let edge = m.get(ix, iy)
                    && [(1, 0), (n - 1, 0), (0, 1), (0, n - 1)]
                        .iter()
                        .any(|&(dx, dy)| !m.get((ix + dx) % n, (iy + dy) % n));
                if edge {
                    px.copy_from_slice(&[0, 160, 0, 255]);
                }
            }
        }
    }
    out
}

/// Mask at phase `t` (dark) over the union of masks at `samples` equally spaced
/// earlier phases in `[0, t]` (grey).
pub fn mask_preview(n: usize, subdomain: &str, t: f64, samples: u32) -> Result<Vec<u8>, String> {
    let grid = Grid::new(n).map_err(|e| e.to_string())?;
    let spec = parse_subdomain(subdomain)?;
    let now = mask_at(&spec, grid, t);
    let mut trail = Mask::empty(grid);
    for i in 0..samples {
        trail = trail.union(&mask_at(&spec, grid, t * i as f64 / samples as f64));
    }
    let mut out = vec![0u8; 4 * n * n];
    for row in 0..n {
        let iy = n - 1 - row;
        for ix in 0..n {
            let v = if now.get(ix, iy) {
                40
            } else if trail.get(ix, iy) {
                170
            } else {
                250
            };
            out[4 * (row * n + ix)..4 * (row * n + ix) + 4].copy_from_slice(&[v, v, v, 255]);
        }
    }
    Ok(out)
}

/// Thickness-ratio fit for a centered square of the given area fraction, as a
/// small JSON object with the per-K maxima.
pub fn spectral_explorer(n: usize, fraction: f64, k_max: u32, samples: usize, seed: u64) -> Result<String, String> {
    let grid = Grid::new(n).map_err(|e| e.to_string())?;
    let spec = parse_subdomain(&fraction.to_string())?;
    let mask = mask_at(&spec, grid, 0.0);
    let k_list: Vec<u32> = (1..=k_max).collect();
    let fit = fit_spectral_constant(&mask, &k_list, samples, 0, seed).map_err(|e| e.to_string())?;
    let ks: Vec<String> = fit.rows.iter().map(|r| r.0.to_string()).collect();
    let ratios: Vec<String> = fit.rows.iter().map(|r| format!("{:e}", r.1)).collect();
    Ok(format!(
        "{{\"slope\":{:e},\"intercept\":{:e},\"r_squared\":{:e},\"mask_fraction\":{:e},\"k\":[{}],\"max_ratio\":[{}]}}",
        fit.slope,
        fit.intercept,
        fit.r_squared,
        mask.fraction(),
        ks.join(","),
        ratios.join(",")
    ))
}
