//! Synchronization error quotients and exponential-rate fits.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mask::Mask;
use crate::transform::inverse_unchecked;

/// One row of an error series.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub time: f64,
    /// `‖ω̃ - ω‖_{L²(Ω₀)} / ‖ω‖_{L²(Ω₀)}`
    pub rel_l2: f64,
    /// `max |ω̃ - ω| / max |ω|` over the nodes
    pub rel_linf: f64,
    /// `‖ω̃ - ω‖_{L²(R)} / ‖ω‖_{L²(R)}` per requested region `R`
    pub rel_l2_regions: Vec<f64>,
}

impl ErrorRow {
    pub fn csv_row(&self) -> String {
        let mut s = format!("{:e},{:e},{:e}", self.time, self.rel_l2, self.rel_linf);
        for r in &self.rel_l2_regions {
            s.push_str(&format!(",{r:e}"));
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorSeries {
    pub rows: Vec<ErrorRow>,
}

impl ErrorSeries {
    pub fn csv_header(regions: usize) -> String {
        let mut s = String::from("t,rel_l2,rel_linf");
        for i in 0..regions {
            s.push_str(&format!(",rel_l2_region_{i}"));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let regions = self.rows.first().map_or(0, |r| r.rel_l2_regions.len());
        let mut out = Self::csv_header(regions);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn last(&self) -> Option<&ErrorRow> {
        self.rows.last()
    }

    /// First sample time at which the global relative L² error drops below `threshold`.
    pub fn time_to_reach(&self, threshold: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.rel_l2 < threshold).map(|r| r.time)
    }
}

/// Relative errors of `assim` against `reference`, globally and per region.
pub fn error_metrics(reference: &SpectralField, assim: &SpectralField, regions: &[Mask]) -> Result<ErrorRow> {
    if reference.grid() != assim.grid() {
        return Err(Error::GridMismatch(reference.grid().n(), assim.grid().n()));
    }
    let diff = assim.sub(reference);
    // Separate transforms keep `assim = 0` at a ratio of exactly 1.
    let ref_phys = inverse_unchecked(reference);
    let diff_phys = inverse_unchecked(&diff);
    let ref_l2 = ref_phys.l2_norm();
    let ref_linf = ref_phys.linf_norm();
    if ref_l2 == 0.0 || ref_linf == 0.0 {
        return Err(Error::DegenerateReference);
    }
    let rel_l2_regions = regions
        .iter()
        .map(|m| {
            let denom = ref_phys.masked_l2_norm(m)?;
            if denom == 0.0 {
                return Err(Error::DegenerateReference);
            }
            Ok(diff_phys.masked_l2_norm(m)? / denom)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorRow {
        time: 0.0,
        rel_l2: diff_phys.l2_norm() / ref_l2,
        rel_linf: diff_phys.linf_norm() / ref_linf,
        rel_l2_regions,
    })
}

/// Least-squares fit of `log(rel_l2)` against `t` over `[t0, t1]`; returns
/// `(λ, r²)` with `λ = -slope`.
pub fn fit_rate(series: &ErrorSeries, window: (f64, f64)) -> Result<(f64, f64)> {
    let rows: Vec<&ErrorRow> = series
        .rows
        .iter()
        .filter(|r| r.time >= window.0 && r.time <= window.1)
        .collect();
    if rows.len() < 8 {
        return Err(Error::TooFewSamples {
            needed: 8,
            got: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| !(r.rel_l2 > 0.0)) {
        return Err(Error::SaturatedSeries(r.time));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.rel_l2.ln()).collect();
    let (slope, _, r2) = linear_fit(&xs, &ys);
    Ok((-slope, r2))
}

/// Ordinary least squares `y ≈ slope·x + intercept`; returns `(slope, intercept, r²)`.
/// A perfectly flat response has `r² = 1`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    (slope, intercept, r2)
}
