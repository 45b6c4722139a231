//! Flat `section.key = value` experiment files.
//!
//! ```text
//! # comment
//! seed = 7
//! solver.n = 128
//! solver.nu = 1e-3
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nudging::assimilation::NudgingParams;
use nudging::observation::{Interpolant, ObservationConfig, SubdomainSpec};
use nudging::solver::{Bootstrap, ForcingSpec, SolverConfig};
use nudging::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.reason)
    }
}

impl std::error::Error for ConfigError {}

fn key_err(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        line: None,
        key: Some(key.to_string()),
        reason: reason.into(),
    }
}

/// Every key a config file may contain.
pub const KNOWN_KEYS: &[&str] = &[
    "seed",
    "solver.n",
    "solver.nu",
    "solver.dt",
    "solver.gevrey_sigma",
    "solver.bootstrap",
    "forcing.band_lo",
    "forcing.band_hi",
    "forcing.grashof",
    "spinup.duration",
    "spinup.sample_interval",
    "assimilate.mu",
    "assimilate.horizon",
    "assimilate.sample_interval",
    "assimilate.snapshot_times",
    "assimilate.stop_below",
    "assimilate.region_fractions",
    "observation.subdomain",
    "observation.area_fraction",
    "observation.center",
    "observation.period",
    "observation.stride_p",
    "observation.interpolant",
    "observation.spectral_cutoff",
    "verify.suites",
    "verify.mask_shape",
    "verify.mask_fraction",
    "verify.k_list",
    "verify.samples_per_k",
    "verify.refine",
    "verify.p_list",
    "verify.ensemble",
    "verify.band",
];

#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |reason: String, key: Option<String>| ConfigError {
                line: Some(line_no),
                key,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at("expected `key = value`".into(), None))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(at("empty key".into(), None));
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(at("unknown key".into(), Some(key.into())));
            }
            if value.is_empty() {
                return Err(at("empty value".into(), Some(key.into())));
            }
            if entries.insert(key.to_string(), (line_no, value.to_string())).is_some() {
                return Err(at("duplicate key".into(), Some(key.into())));
            }
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn located(&self, key: &str, reason: String) -> ConfigError {
        ConfigError {
            line: self.entries.get(key).map(|(l, _)| *l),
            key: Some(key.into()),
            reason,
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.located(key, format!("cannot parse {v:?}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.get(key)?.ok_or_else(|| key_err(key, "missing required key"))
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list; `a..b` expands an inclusive integer range.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        let bad = |item: &str| self.located(key, format!("cannot parse list item {item:?}"));
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some((a, b)) = item.split_once("..") {
                let (a, b): (i64, i64) = (
                    a.trim().parse().map_err(|_| bad(item))?,
                    b.trim().parse().map_err(|_| bad(item))?,
                );
                for x in a..=b {
                    out.push(x.to_string().parse().map_err(|_| bad(item))?);
                }
            } else {
                out.push(item.parse().map_err(|_| bad(item))?);
            }
        }
        Ok(Some(out))
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.get_or("seed", 0)
    }

    pub fn solver(&self) -> Result<SolverConfig, ConfigError> {
        let n: usize = self.require("solver.n")?;
        let grid = Grid::new(n).map_err(|e| self.located("solver.n", e.to_string()))?;
        let nu: f64 = self.require("solver.nu")?;
        let dt: f64 = self.require("solver.dt")?;
        let bootstrap = match self.raw("solver.bootstrap") {
            None => Bootstrap::default(),
            Some(s) => Bootstrap::parse(s)
                .ok_or_else(|| self.located("solver.bootstrap", format!("unknown bootstrap {s:?} (rk3, euler-ab2)")))?,
        };
        let defaults = ForcingSpec::default();
        let forcing = ForcingSpec {
            band_lo: self.get_or("forcing.band_lo", defaults.band_lo)?,
            band_hi: self.get_or("forcing.band_hi", defaults.band_hi)?,
            grashof: self.require("forcing.grashof")?,
            nu,
            // Same as the library configs, so `seed = 0` reproduces `SolverConfig::desk()`.
            seed: self.seed()?,
        };
        let config = SolverConfig {
            grid,
            nu,
            dt,
            forcing,
            gevrey_sigma: self.get_or("solver.gevrey_sigma", 0.0)?,
            bootstrap,
        };
        config.validate().map_err(|e| key_err("solver", e.to_string()))?;
        config
            .forcing
            .validate(grid)
            .map_err(|e| key_err("forcing", e.to_string()))?;
        Ok(config)
    }

    pub fn subdomain(&self) -> Result<SubdomainSpec, ConfigError> {
        let kind = self.raw("observation.subdomain").unwrap_or("full");
        let period = self.get_or("observation.period", 1.0)?;
        let spec = match kind {
            "full" => SubdomainSpec::Full,
            "static" => {
                let fraction: f64 = self.require("observation.area_fraction")?;
                let center = match self.list::<f64>("observation.center")? {
                    None => (std::f64::consts::PI, std::f64::consts::PI),
                    Some(c) if c.len() == 2 => (c[0], c[1]),
                    Some(_) => return Err(self.located("observation.center", "expected `x, y`".into())),
                };
                SubdomainSpec::Static {
                    side_fraction: fraction.sqrt(),
                    center,
                }
            }
            "mobile_quarter" => SubdomainSpec::Mobile {
                path: nudging::observation::MobilePath::Quarter,
                period,
            },
            "mobile_sixteenth" => SubdomainSpec::Mobile {
                path: nudging::observation::MobilePath::Sixteenth,
                period,
            },
            other => {
                return Err(self.located(
                    "observation.subdomain",
                    format!(
                        "unknown subdomain or trajectory {other:?} (full, static, mobile_quarter, mobile_sixteenth)"
                    ),
                ))
            }
        };
        spec.validate().map_err(|e| key_err("observation", e.to_string()))?;
        Ok(spec)
    }

    pub fn observation(&self, grid: Grid) -> Result<ObservationConfig, ConfigError> {
        let interpolant = match self.raw("observation.interpolant") {
            None => Interpolant::default(),
            Some(s) => Interpolant::parse(s).ok_or_else(|| {
                self.located(
                    "observation.interpolant",
                    format!("unknown interpolant {s:?} (nodal_smooth, volume_average)"),
                )
            })?,
        };
        let obs = ObservationConfig {
            subdomain: self.subdomain()?,
            stride_p: self.get_or("observation.stride_p", 0)?,
            interpolant,
            spectral_cutoff: self.get("observation.spectral_cutoff")?,
        };
        obs.validate(grid).map_err(|e| key_err("observation", e.to_string()))?;
        Ok(obs)
    }

    pub fn nudging(&self, grid: Grid) -> Result<NudgingParams, ConfigError> {
        let mu: f64 = self.require("assimilate.mu")?;
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(self.located("assimilate.mu", format!("mu must be >= 0, got {mu}")));
        }
        Ok(NudgingParams::new(mu, self.observation(grid)?))
    }
}
