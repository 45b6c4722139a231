//! Node indicators `χΩ` of observation regions.

use crate::grid::Grid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    grid: Grid,
    bits: Vec<bool>,
}

impl Mask {
    pub fn from_fn(grid: Grid, inside: impl Fn(usize, usize) -> bool) -> Self {
        let n = grid.n();
        let bits = (0..grid.len()).map(|i| inside(i % n, i / n)).collect();
        Self { grid, bits }
    }

    pub fn from_bits(grid: Grid, bits: Vec<bool>) -> Option<Self> {
        (bits.len() == grid.len()).then_some(Self { grid, bits })
    }

    pub fn full(grid: Grid) -> Self {
        Self {
            grid,
            bits: vec![true; grid.len()],
        }
    }

    pub fn empty(grid: Grid) -> Self {
        Self {
            grid,
            bits: vec![false; grid.len()],
        }
    }

    /// Nodes within periodic distance `radius` of `center`.
    pub fn disk(grid: Grid, center: (f64, f64), radius: f64) -> Self {
        let l = grid.length();
        let wrap = |d: f64| {
            let d = d.rem_euclid(l);
            d.min(l - d)
        };
        Self::from_fn(grid, |ix, iy| {
            let dx = wrap(grid.coord(ix) - center.0);
            let dy = wrap(grid.coord(iy) - center.1);
            dx * dx + dy * dy <= radius * radius
        })
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.bits[iy * self.grid.n() + ix]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Fraction of nodes set.
    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.grid.len() as f64
    }

    pub fn union(&self, other: &Mask) -> Mask {
        Self {
            grid: self.grid,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }
}
