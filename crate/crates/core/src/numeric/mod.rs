//! Floating-point kernels for the numeric mode.

mod jacobi;
mod roots;

pub use jacobi::{hermitian_eigen, HermitianEigen};
pub use roots::poly_roots;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exact::inverse;
use crate::matrix::CMatrix;
use crate::scalar::{Complex64, Ring};

fn norm_one(a: &CMatrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Reciprocal 1-norm condition number and the inverse, or `None` when a pivot vanishes.
pub fn inverse_with_rcond(a: &CMatrix) -> Result<(Option<CMatrix>, f64)> {
    a.ensure_square()?;
    if a.rows() == 0 {
        return Ok((Some(CMatrix::zeros(0, 0)), 1.0));
    }
    match inverse(a) {
        Ok(inv) => {
            let rcond = 1.0 / (norm_one(a) * norm_one(&inv));
            let rcond = if rcond.is_finite() { rcond } else { 0.0 };
            Ok((Some(inv), rcond))
        }
        Err(Error::Singular) => Ok((None, 0.0)),
        Err(e) => Err(e),
    }
}

/// Orthonormal basis of the numerical nullspace: right singular vectors whose
/// singular value is below `rel_tol · σ_max` (or all of them for a zero map).
pub fn svd_nullspace(a: &CMatrix, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let cols = a.cols();
    // Pad to at least square so the SVD returns a full set of right vectors.
    let rows = a.rows().max(cols);
    let m = DMatrix::<Complex64>::from_fn(rows, cols, |i, j| {
        if i < a.rows() {
            a[(i, j)]
        } else {
            Complex64::zero()
        }
    });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s < cut)
        .map(|(k, _)| (0..cols).map(|j| v_t[(k, j)].conj()).collect())
        .collect()
}
