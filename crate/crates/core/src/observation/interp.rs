//! Coarse sampling, the recursive smoother `K_p`, and the local interpolants.

use crate::error::{Error, Result};
use crate::field::{PhysicalField, SpectralField};
use crate::grid::Grid;
use crate::mask::Mask;
use num_complex::Complex64;

/// Values at every `2^p`-th node in each direction.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseLattice {
    grid: Grid,
    p: u32,
    values: Vec<f64>,
}

impl CoarseLattice {
    pub fn new(grid: Grid, p: u32, values: Vec<f64>) -> Result<Self> {
        let m = side(grid, p)?;
        if values.len() != m * m {
            return Err(Error::SizeMismatch {
                expected: m * m,
                actual: values.len(),
            });
        }
        Ok(Self { grid, p, values })
    }

    /// Nodes per side of the lattice.
    pub fn side(&self) -> usize {
        self.grid.n() >> self.p
    }

    pub fn stride_exponent(&self) -> u32 {
        self.p
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.side() + i]
    }
}

fn side(grid: Grid, p: u32) -> Result<usize> {
    let n = grid.n();
    if p >= usize::BITS || n % (1usize << p) != 0 || (n >> p) == 0 {
        return Err(Error::StrideMismatch { p, n });
    }
    Ok(n >> p)
}

/// Observation spacing `h = L·2^p/n`.
pub fn spacing(grid: Grid, p: u32) -> f64 {
    grid.dx() * (1u64 << p) as f64
}

pub fn subsample(field: &PhysicalField, p: u32) -> Result<CoarseLattice> {
    let grid = field.grid();
    let m = side(grid, p)?;
    let stride = 1usize << p;
    let values = (0..m * m)
        .map(|k| field.at((k % m) * stride, (k / m) * stride))
        .collect();
    Ok(CoarseLattice { grid, p, values })
}

/// `p` rounds of midpoint refinement with periodic wraparound.
///
/// Each round keeps existing nodes, puts `(a+b)/2` on edge midpoints and
/// `(a+b+c+d)/4` at cell centers.
pub fn smoother_kp(coarse: &CoarseLattice) -> PhysicalField {
    let mut m = coarse.side();
    let mut cur = coarse.values.clone();
    for _ in 0..coarse.p {
        let f = 2 * m;
        let mut next = vec![0.0; f * f];
        let at = |i: usize, j: usize| cur[(j % m) * m + (i % m)];
        for j in 0..m {
            for i in 0..m {
                let a = at(i, j);
                let b = at(i + 1, j);
                let c = at(i + 1, j + 1);
                let d = at(i, j + 1);
                next[(2 * j) * f + 2 * i] = a;
                next[(2 * j) * f + 2 * i + 1] = 0.5 * (a + b);
                next[(2 * j + 1) * f + 2 * i] = 0.5 * (a + d);
                next[(2 * j + 1) * f + 2 * i + 1] = 0.25 * (a + b + c + d);
            }
        }
        cur = next;
        m = f;
    }
    PhysicalField::from_vec_unchecked(coarse.grid, cur)
}

/// Cell `S_i` of stride `2^p` covers nodes `[i·2^p, (i+1)·2^p)` per axis.
fn for_each_cell(grid: Grid, p: u32, mut visit: impl FnMut(usize, usize, usize)) -> Result<()> {
    let m = side(grid, p)?;
    let stride = 1usize << p;
    for cj in 0..m {
        for ci in 0..m {
            visit(ci * stride, cj * stride, stride);
        }
    }
    Ok(())
}

/// `Σ χ_{S_i∩Ω} (fχΩ)_{S_i}`: cell means of `f·χΩ` over the full cell, kept on `Ω`.
pub fn volume_average_interpolant(field: &PhysicalField, p: u32, mask: &Mask) -> Result<PhysicalField> {
    let grid = field.grid();
    let n = grid.n();
    let mut out = vec![0.0; grid.len()];
    for_each_cell(grid, p, |x0, y0, s| {
        let mut sum = 0.0;
        for y in y0..y0 + s {
            for x in x0..x0 + s {
                if mask.get(x, y) {
                    sum += field.at(x, y);
                }
            }
        }
        let mean = sum / (s * s) as f64;
        for y in y0..y0 + s {
            for x in x0..x0 + s {
                if mask.get(x, y) {
                    out[y * n + x] = mean;
                }
            }
        }
    })?;
    Ok(PhysicalField::from_vec_unchecked(grid, out))
}

/// `Σ χ_{S_i∩Ω} (χΩ f)(x_i)` with `x_i` the cell's center node.
pub fn nodal_interpolant(field: &PhysicalField, p: u32, mask: &Mask) -> Result<PhysicalField> {
    let grid = field.grid();
    let n = grid.n();
    let mut out = vec![0.0; grid.len()];
    for_each_cell(grid, p, |x0, y0, s| {
        let (cx, cy) = (x0 + s / 2, y0 + s / 2);
        let value = if mask.get(cx, cy) { field.at(cx, cy) } else { 0.0 };
        for y in y0..y0 + s {
            for x in x0..x0 + s {
                if mask.get(x, y) {
                    out[y * n + x] = value;
                }
            }
        }
    })?;
    Ok(PhysicalField::from_vec_unchecked(grid, out))
}

/// Keeps only modes with `max(|kx|, |ky|) ≤ cutoff`.
pub fn spectral_project(field: &SpectralField, cutoff: u32) -> Result<SpectralField> {
    if cutoff < 1 {
        return Err(Error::InvalidParameter("spectral cutoff must be >= 1".into()));
    }
    let k = cutoff as i64;
    Ok(field.map_modes(|kx, ky| {
        if kx.abs().max(ky.abs()) <= k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}
