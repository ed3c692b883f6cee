//! Isospectral reductions of self-adjoint matrices, latent symmetries of the
//! reduction, and their lift to normal matrices commuting with the original.

pub mod error;
pub mod exact;
pub mod matrix;
pub mod numeric;
pub mod generate;
pub mod io;
pub mod isr;
pub mod lift;
pub mod scalar;
pub mod symmetry;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::{CMatrix, Matrix};
pub use scalar::{Complex64, ExactField, Field, Gaussian, Rational, Ring, Scalar};
