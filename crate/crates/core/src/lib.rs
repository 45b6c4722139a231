//! Pseudospectral 2D Navier–Stokes on the periodic box with nudging data
//! assimilation driven by observations confined to a subdomain.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`], [`field`], [`transform`], [`ops`]: lattice, transforms, and
//!   spectral operators (two-thirds dealiasing, Biot–Savart, `u·∇ω`).
//! * [`solver`]: forcing, the integrating-factor Adams–Bashforth stepper,
//!   spin-up, diagnostics, and checkpoints.
//! * [`observation`]: static and moving subdomains, the coarse sampler, the
//!   recursive smoother `K_p`, local interpolants, and the composed operator `J`.
//! * [`assimilation`]: the nudged twin experiment and its error metrics, plus
//!   the parameter advisor.
//! * [`inequality`]: empirical checks of the spectral and interpolation
//!   inequalities on band-limited fields.

pub mod assimilation;
pub mod error;
pub mod field;
pub mod grid;
pub mod inequality;
pub mod io;
pub mod mask;
pub mod observation;
pub mod ops;
pub mod seed;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{PhysicalField, SpectralField};
pub use grid::{Grid, BOX_LENGTH, LAMBDA1};
pub use mask::Mask;
pub use num_complex::Complex64;
