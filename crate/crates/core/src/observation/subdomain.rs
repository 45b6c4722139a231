//! Observation regions: centered static squares and squares that sweep the box.

use crate::grid::Grid;
use crate::mask::Mask;
use std::f64::consts::PI;

/// Path of a moving square's lower-left corner, in node units.
pub trait Trajectory {
    /// Corner at phase `s ∈ [0, 1)` of one period.
    fn corner(&self, s: f64, n: usize) -> (f64, f64);
    /// Side of the square in nodes.
    fn side(&self, n: usize) -> usize;
}

/// Quarter-area square looping counterclockwise around `[0, n/2]²`.
///
/// `n_x` ramps `0 → n/2` on `[0, ¼]`, holds on `[¼, ½]`, ramps back on
/// `[½, ¾]`, holds `0` on `[¾, 1]`; `n_y` is the same waveform a quarter
/// period later.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuarterLoop;

/// Sixteenth-area square scanning the 4×4 tile lattice row by row, reversing
/// direction on alternate rows; `n_y` jumps between rows. Within a row `n_x`
/// sweeps `0 → 3n/4` in the first ¾ of the row's quarter period and holds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SixteenthSerpentine;

fn trapezoid(s: f64) -> f64 {
    let s = s.rem_euclid(1.0);
    if s < 0.25 {
        4.0 * s
    } else if s < 0.5 {
        1.0
    } else if s < 0.75 {
        1.0 - 4.0 * (s - 0.5)
    } else {
        0.0
    }
}

impl Trajectory for QuarterLoop {
    fn corner(&self, s: f64, n: usize) -> (f64, f64) {
        let half = n as f64 / 2.0;
        (half * trapezoid(s), half * trapezoid(s - 0.25))
    }

    fn side(&self, n: usize) -> usize {
        n / 2
    }
}

impl Trajectory for SixteenthSerpentine {
    fn corner(&self, s: f64, n: usize) -> (f64, f64) {
        let s = s.rem_euclid(1.0);
        let row = ((4.0 * s).floor() as usize).min(3);
        // Ramp over the first three quarters of the row, then dwell on the
        // last tile so period sampling at 1/64 still reaches it.
        let q = ((4.0 * s - row as f64) / 0.75).min(1.0);
        let span = 0.75 * n as f64;
        let x = if row % 2 == 0 { span * q } else { span * (1.0 - q) };
        (x, (row * n / 4) as f64)
    }

    fn side(&self, n: usize) -> usize {
        n / 4
    }
}

pub fn trajectory_quarter(t: f64, n: usize) -> (f64, f64) {
    QuarterLoop.corner(t, n)
}

pub fn trajectory_sixteenth(t: f64, n: usize) -> (f64, f64) {
    SixteenthSerpentine.corner(t, n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MobilePath {
    Quarter,
    Sixteenth,
}

impl MobilePath {
    pub fn trajectory(&self) -> &'static dyn Trajectory {
        match self {
            MobilePath::Quarter => &QuarterLoop,
            MobilePath::Sixteenth => &SixteenthSerpentine,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubdomainSpec {
    Full,
    /// Axis-aligned square of side `side_fraction·L` centered at `center`.
    Static {
        side_fraction: f64,
        center: (f64, f64),
    },
    Mobile {
        path: MobilePath,
        period: f64,
    },
}

impl SubdomainSpec {
    /// Square centered in the box with the given area fraction.
    pub fn centered(area_fraction: f64) -> Self {
        SubdomainSpec::Static {
            side_fraction: area_fraction.sqrt(),
            center: (PI, PI),
        }
    }

    pub fn mobile_quarter() -> Self {
        SubdomainSpec::Mobile {
            path: MobilePath::Quarter,
            period: 1.0,
        }
    }

    pub fn mobile_sixteenth() -> Self {
        SubdomainSpec::Mobile {
            path: MobilePath::Sixteenth,
            period: 1.0,
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, SubdomainSpec::Mobile { .. })
    }

    /// Nominal area fraction of `Ω`.
    pub fn area_fraction(&self) -> f64 {
        match self {
            SubdomainSpec::Full => 1.0,
            SubdomainSpec::Static { side_fraction, .. } => side_fraction * side_fraction,
            SubdomainSpec::Mobile {
                path: MobilePath::Quarter,
                ..
            } => 0.25,
            SubdomainSpec::Mobile {
                path: MobilePath::Sixteenth,
                ..
            } => 1.0 / 16.0,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: String| Err(crate::Error::InvalidParameter(m));
        match self {
            SubdomainSpec::Full => Ok(()),
            SubdomainSpec::Static { side_fraction, center } => {
                let l = crate::BOX_LENGTH;
                let half = side_fraction * l / 2.0;
                if !(*side_fraction > 0.0 && *side_fraction <= 1.0) {
                    return bad(format!("side fraction must lie in (0, 1], got {side_fraction}"));
                }
                let eps = 1e-12;
                if center.0 - half < -eps
                    || center.0 + half > l + eps
                    || center.1 - half < -eps
                    || center.1 + half > l + eps
                {
                    return bad("static square must lie inside the box".into());
                }
                Ok(())
            }
            SubdomainSpec::Mobile { period, .. } => {
                if *period > 0.0 && period.is_finite() {
                    Ok(())
                } else {
                    bad(format!("period must be positive, got {period}"))
                }
            }
        }
    }
}

/// Node indicator of `Ω` at time `t`.
///
/// Static squares take node `(i, j)` iff the center of its cell
/// `[x_i, x_i + dx)` lies in the closed square. Mobile squares snap the corner
/// to the nearest node and wrap periodically.
pub fn mask_at(spec: &SubdomainSpec, grid: Grid, t: f64) -> Mask {
    match spec {
        SubdomainSpec::Full => Mask::full(grid),
        SubdomainSpec::Static { side_fraction, center } => {
            let dx = grid.dx();
            let half = side_fraction * grid.length() / 2.0;
            let inside = |i: usize, c: f64| {
                let x = (i as f64 + 0.5) * dx;
                x >= c - half && x <= c + half
            };
            Mask::from_fn(grid, |ix, iy| inside(ix, center.0) && inside(iy, center.1))
        }
        SubdomainSpec::Mobile { path, period } => {
            let traj = path.trajectory();
            mobile_mask(traj, grid, t / period)
        }
    }
}

/// Square of `traj.side(n)` nodes with its corner at phase `s`.
pub fn mobile_mask(traj: &dyn Trajectory, grid: Grid, s: f64) -> Mask {
    let n = grid.n();
    let (cx, cy) = traj.corner(s, n);
    let cx = (cx.round() as usize) % n;
    let cy = (cy.round() as usize) % n;
    let side = traj.side(n);
    Mask::from_fn(grid, |ix, iy| (ix + n - cx) % n < side && (iy + n - cy) % n < side)
}
