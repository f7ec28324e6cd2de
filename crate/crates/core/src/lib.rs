//! Spectral numerics for a hydrogen-like atom in four dimensions and on the
//! cylinder `R^3 x S^1` with the Gauss-law (inverse-square) potential.
//!
//! Internal units throughout: `hbar^2 / 2m = 1`, Bohr radius `a0 = 1`. The
//! coupling of the compactified atom is `Z = 4R`, so `R = 1/4` is critical.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod variational;

pub use error::{Error, Result};
pub use potential::{PotentialSpec, SpacePoint};
