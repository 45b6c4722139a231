use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use nudging::assimilation::{
    advise_parameters, nudged_step, run_twin, ErrorRow, ErrorSeries, NudgingParams, TwinExperiment, TwinSink,
};
use nudging::inequality::{fit_spectral_constant, verify_approx_inequality, ApproxKind};
use nudging::io::{write_nfld, write_pbm};
use nudging::observation::{mask_at, ObservationConfig, SubdomainSpec};
use nudging::seed::derive_seed;
use nudging::solver::{
    read_checkpoint, spinup, write_checkpoint, Checkpoint, Integrator, SolverConfig, SolverState,
    DIAGNOSTICS_CSV_HEADER,
};
use nudging::transform::inverse;
use nudging::{Grid, Mask, SpectralField};

use crate::config::Config;
use crate::output::{time_stem, OutputDir};
use crate::CliError;

fn load_config(path: &Path) -> Result<(Config, String), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((Config::parse(&text)?, text))
}

pub fn cmd_spinup(config_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let (cfg, text) = load_config(config_path)?;
    let solver = cfg.solver()?;
    let duration: f64 = cfg.require("spinup.duration")?;
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(CliError::Config(format!(
            "key `spinup.duration`: must be >= 0, got {duration}"
        )));
    }
    let every = solver.steps_for(cfg.get_or("spinup.sample_interval", 1.0)?).max(1);
    let seed = cfg.seed()?;

    let mut out = OutputDir::create(out_dir)?;
    let mut diag = out.create_file("diag.csv")?;
    writeln!(diag, "{DIAGNOSTICS_CSV_HEADER}")?;
    let mut io_err = None;
    let result = spinup(&solver, duration, every, |_, d| {
        if let Err(e) = writeln!(diag, "{}", d.csv_row()) {
            io_err.get_or_insert(e);
        }
        Ok(())
    });
    diag.flush()?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let state = result?;
    let ckpt = Checkpoint {
        state,
        nu: solver.nu,
        dt: solver.dt,
        seed,
    };
    let mut f = out.create_file("checkpoint.nckp")?;
    write_checkpoint(&mut f, &ckpt)?;
    drop(f);
    out.finish("spinup", seed, &text)?;
    Ok(())
}

struct FileSink<'a> {
    out: &'a mut OutputDir,
    errors: std::io::BufWriter<fs::File>,
}

impl TwinSink for FileSink<'_> {
    fn row(&mut self, row: &ErrorRow) -> nudging::Result<()> {
        writeln!(self.errors, "{}", row.csv_row())?;
        Ok(())
    }

    fn snapshot(&mut self, t: f64, reference: &SpectralField, assim: &SpectralField) -> nudging::Result<()> {
        let stem = time_stem(t);
        for (label, field) in [
            ("ref", reference.clone()),
            ("assim", assim.clone()),
            ("diff", assim.sub(reference)),
        ] {
            let mut f = self.out.create_file(&format!("snapshots/{stem}_{label}.nfld"))?;
            write_nfld(&mut f, &inverse(&field)?)?;
            f.flush()?;
        }
        Ok(())
    }

    fn mask(&mut self, t: f64, mask: &Mask) -> nudging::Result<()> {
        let mut f = self.out.create_file(&format!("masks/{}.pbm", time_stem(t)))?;
        write_pbm(&mut f, mask)?;
        f.flush()?;
        Ok(())
    }
}

fn regions(cfg: &Config, grid: Grid, obs: &ObservationConfig) -> Result<Vec<Mask>, CliError> {
    Ok(match cfg.list::<f64>("assimilate.region_fractions")? {
        Some(fracs) => fracs
            .into_iter()
            .map(|f| {
                let spec = SubdomainSpec::centered(f);
                spec.validate()
                    .map_err(|e| CliError::Config(format!("key `assimilate.region_fractions`: {e}")))?;
                Ok(mask_at(&spec, grid, 0.0))
            })
            .collect::<Result<_, CliError>>()?,
        None if matches!(obs.subdomain, SubdomainSpec::Static { .. }) => vec![mask_at(&obs.subdomain, grid, 0.0)],
        None => Vec::new(),
    })
}

pub fn cmd_assimilate(config_path: &Path, checkpoint_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let (cfg, text) = load_config(config_path)?;
    let solver = cfg.solver()?;
    let grid = solver.grid;
    let nudging = cfg.nudging(grid)?;
    let bytes =
        fs::read(checkpoint_path).map_err(|e| CliError::Config(format!("{}: {e}", checkpoint_path.display())))?;
    let ckpt = read_checkpoint(bytes.as_slice())?;
    let ck_n = ckpt.state.omega().grid().n();
    if ck_n != grid.n() {
        return Err(CliError::Config(format!(
            "grid mismatch: checkpoint has n = {ck_n}, config has solver.n = {}",
            grid.n()
        )));
    }
    if ckpt.nu != solver.nu || ckpt.dt != solver.dt {
        return Err(CliError::Config(format!(
            "checkpoint (nu = {}, dt = {}) does not match config (nu = {}, dt = {})",
            ckpt.nu, ckpt.dt, solver.nu, solver.dt
        )));
    }
    let regions = regions(&cfg, grid, &nudging.observation)?;
    let region_count = regions.len();
    let exp = TwinExperiment {
        config: solver,
        reference: ckpt.state,
        nudging,
        horizon: cfg.require("assimilate.horizon")?,
        sample_interval: cfg.get_or("assimilate.sample_interval", 1.0)?,
        regions,
        snapshot_times: cfg.list("assimilate.snapshot_times")?.unwrap_or_default(),
        stop_below: cfg.get("assimilate.stop_below")?,
    };
    let seed = cfg.seed()?;
    let mut out = OutputDir::create(out_dir)?;
    let mut errors = out.create_file("errors.csv")?;
    writeln!(errors, "{}", ErrorSeries::csv_header(region_count))?;
    let mut sink = FileSink { out: &mut out, errors };
    let result = run_twin(&exp, &mut sink);
    sink.errors.flush()?;
    drop(sink);
    let series = result?;
    if let Some(last) = series.last() {
        eprintln!(
            "final t = {} rel_l2 = {:e} rel_linf = {:e}",
            last.time, last.rel_l2, last.rel_linf
        );
    }
    out.finish("assimilate", seed, &text)?;
    Ok(())
}

fn verify_mask(cfg: &Config, grid: Grid) -> Result<Mask, CliError> {
    let fraction: f64 = cfg.get_or("verify.mask_fraction", 0.765625)?;
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CliError::Config(format!(
            "key `verify.mask_fraction`: must lie in (0, 1], got {fraction}"
        )));
    }
    let mask = match cfg.raw("verify.mask_shape").unwrap_or("square") {
        "square" => mask_at(&SubdomainSpec::centered(fraction), grid, 0.0),
        "disk" => {
            let l = grid.length();
            let radius = (fraction * l * l / std::f64::consts::PI).sqrt();
            Mask::disk(grid, (l / 2.0, l / 2.0), radius)
        }
        other => {
            return Err(CliError::Config(format!(
                "key `verify.mask_shape`: unknown shape {other:?} (square, disk)"
            )))
        }
    };
    if mask.count() == 0 {
        return Err(CliError::Config(
            "key `verify.mask_fraction`: mask contains no nodes".into(),
        ));
    }
    Ok(mask)
}

pub fn cmd_verify(config_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let (cfg, text) = load_config(config_path)?;
    let n: usize = cfg.require("solver.n")?;
    let grid = Grid::new(n).map_err(|e| CliError::Config(format!("key `solver.n`: {e}")))?;
    let mask = verify_mask(&cfg, grid)?;
    let seed = cfg.seed()?;
    let suites: Vec<String> = cfg
        .list("verify.suites")?
        .unwrap_or_else(|| vec!["spectral".into(), "volume".into(), "nodal".into()]);
    let mut out = OutputDir::create(out_dir)?;
    let mut summary = String::new();
    for suite in &suites {
        match suite.as_str() {
            "spectral" => {
                let default_k: Vec<u32> = (2..=16.min((n / 2 - 1) as u32)).collect();
                let k_list = cfg.list("verify.k_list")?.unwrap_or(default_k);
                let fit = fit_spectral_constant(
                    &mask,
                    &k_list,
                    cfg.get_or("verify.samples_per_k", 20)?,
                    cfg.get_or("verify.refine", 0)?,
                    derive_seed(seed, "verify/spectral"),
                )?;
                out.write("spectral_fit.csv", fit.to_csv().as_bytes())?;
                out.write("spectral_fit.json", format!("{}\n", fit.summary()).as_bytes())?;
                summary.push_str(&format!(
                    "spectral slope = {:e} intercept = {:e} r_squared = {:e} max_ratio = {:e}\n",
                    fit.slope, fit.intercept, fit.r_squared, fit.max_ratio_observed
                ));
            }
            kind @ ("volume" | "nodal") => {
                let kind = ApproxKind::parse(kind).expect("matched above");
                let table = verify_approx_inequality(
                    kind,
                    &cfg.list("verify.p_list")?.unwrap_or_else(|| vec![1, 2, 3, 4]),
                    &mask,
                    cfg.get_or("verify.ensemble", 20)?,
                    cfg.get_or("verify.band", 8)?,
                    derive_seed(seed, "verify/approx"),
                )?;
                out.write(&format!("approx_{}.csv", kind.name()), table.to_csv().as_bytes())?;
                summary.push_str(&format!(
                    "{} c0 = {:e} spread = {:e}\n",
                    kind.name(),
                    table.c0,
                    table.spread()
                ));
            }
            other => {
                return Err(CliError::Config(format!(
                    "key `verify.suites`: unknown suite {other:?} (spectral, volume, nodal)"
                )))
            }
        }
    }
    out.write("summary.txt", summary.as_bytes())?;
    print!("{summary}");
    out.finish("verify", seed, &text)?;
    Ok(())
}

pub struct AdviseArgs {
    pub nu: f64,
    pub grashof: f64,
    pub c: f64,
    pub c_omega: f64,
    pub n_modes: f64,
    pub epsilon: f64,
    pub c0: f64,
}

pub fn cmd_advise(a: &AdviseArgs) -> Result<String, CliError> {
    let advice = advise_parameters(a.nu, a.grashof, (a.c, a.c_omega), a.n_modes, a.epsilon, a.c0)?;
    Ok(format!(
        "mu = {:e}\nh_star = {:e}\nsigma_star = {:e}\neps_bar = {:e}\n\
         # C, C_Omega and c0 are caller-supplied; the theory gives no numeric values.\n\
         # mu grows like exp(C_Omega*sqrt(N)); treat these as scalings, not tuned settings.\n",
        advice.mu, advice.h_star, advice.sigma_star, advice.eps_bar
    ))
}

pub fn cmd_bench(n: usize, steps: u64) -> Result<String, CliError> {
    let grid = Grid::new(n).map_err(|e| CliError::Config(e.to_string()))?;
    let mut config = SolverConfig::desk();
    config.grid = grid;
    if !grid.is_resolved(config.forcing.band_hi as i64, 0) {
        config.forcing.band_lo = 1;
        config.forcing.band_hi = 2;
    }
    let integrator = Integrator::from_config(&config)?;
    let mut state = SolverState::zero(&config);
    for _ in 0..10 {
        integrator.step(&mut state)?;
    }
    let start = Instant::now();
    for _ in 0..steps {
        integrator.step(&mut state)?;
    }
    let plain = start.elapsed().as_secs_f64() / steps.max(1) as f64;

    let params = NudgingParams::new(50.0, ObservationConfig::new(SubdomainSpec::centered(0.765625), 1));
    let mut reference = state.clone();
    let mut assim = SolverState::new(SpectralField::zeros(grid), reference.time());
    let start = Instant::now();
    for _ in 0..steps {
        nudged_step(&mut reference, &mut assim, &params, &integrator)?;
    }
    let nudged = start.elapsed().as_secs_f64() / steps.max(1) as f64;
    Ok(format!(
        "n = {n} steps = {steps}\nstep_ms = {:.4}\nsteps_per_s = {:.1}\ntwin_step_ms = {:.4}\n",
        plain * 1e3,
        1.0 / plain,
        nudged * 1e3
    ))
}
