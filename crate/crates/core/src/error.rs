use thiserror::Error;

use crate::scalar::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not self-adjoint (residual {0:e})")]
    NotSelfAdjoint(f64),

    #[error("invalid index set: {0}")]
    InvalidSubset(String),

    /// `λ − H_S̄S̄` is numerically singular, i.e. λ lies in the spectrum of the complement block.
    #[error("shift λ = {lambda} is singular for the complement block (rcond {rcond:e})")]
    SingularShift { lambda: Complex64, rcond: f64 },

    /// λ is shared by H and its complement block; the projection claim does not apply.
    #[error("λ = {0} is an eigenvalue of the complement block")]
    SharedEigenvalue(Complex64),

    #[error("(λ, x) is not an eigenpair (residual {0:e})")]
    NotEigenpair(f64),

    #[error("eigenvalue pairing is ambiguous near {value} (tolerance {tol:e})")]
    PairingAmbiguous { value: f64, tol: f64 },

    #[error("symmetry candidate is not normal (residual {0:e})")]
    NotNormal(f64),

    #[error("symmetry candidate is singular (smallest |t| = {0:e})")]
    SingularSymmetry(f64),

    #[error("candidate is not a latent symmetry (power-block residual {0:e})")]
    NotLatentSymmetry(f64),

    #[error("Krylov spaces of groups {a} and {b} overlap (inner product {overlap:e})")]
    CrossGroupOverlap { a: usize, b: usize, overlap: f64 },

    #[error("residual basis vector {index} of group {group} does not vanish on S ({value:e})")]
    ResidualNotVanishing { group: usize, index: usize, value: f64 },

    #[error("verification failed: {what} = {value:e} exceeds {bound:e}")]
    VerificationFailed { what: String, value: f64, bound: f64 },

    /// The symmetry has no eigen-decomposition over the exact field in use.
    #[error("no exact eigen-decomposition: {0}")]
    NoExactEigenbasis(String),

    #[error("eigen-decomposition did not converge")]
    NoConvergence,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
