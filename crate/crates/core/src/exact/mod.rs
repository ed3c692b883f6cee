//! Exact polynomial, rational-function and matrix kernels.

mod elim;
mod poly;
mod ratfun;

pub use elim::{
    bareiss_det, bareiss_solve, char_poly, char_poly_faddeev, inverse, nullspace, rank, ratfun_det,
    rref,
};
pub use poly::{poly_gcd, Poly};
pub use ratfun::RatFun;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::{ExactField, Field};

pub type RatFunMatrix<S> = Matrix<RatFun<S>>;

/// Exact determinant of a scalar matrix.
pub fn exact_det<S: ExactField>(m: &Matrix<S>) -> Result<S> {
    bareiss_det(m)
}

/// Inverse of a matrix of rational functions; fails when the determinant is identically zero.
pub fn exact_inverse<S: Field>(m: &RatFunMatrix<S>) -> Result<RatFunMatrix<S>> {
    inverse(m)
}

/// Lifts a scalar matrix to constant rational functions.
pub fn to_ratfun<S: Field>(m: &Matrix<S>) -> RatFunMatrix<S> {
    m.map(|x| RatFun::constant(x.clone()))
}
