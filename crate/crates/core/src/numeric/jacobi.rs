//! Cyclic Jacobi diagonalization of Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies an ordinary real Jacobi rotation, so the complex case
//! reduces to the textbook real one.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{Complex64, Ring};

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for n < 2).
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn frobenius(a: &CMatrix) -> f64 {
    a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix. Only the Hermitian part of the
/// input is used.
pub fn hermitian_eigen(input: &CMatrix) -> Result<HermitianEigen> {
    input.ensure_square()?;
    let n = input.rows();
    let mut a = CMatrix::from_fn(n, n, |i, j| (input[(i, j)] + input[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = frobenius(&a);
    let target = f64::EPSILON * scale;

    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    fix_phases(&mut vectors);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.rows();
    let h = a[(p, q)];
    let mag = h.norm();
    if mag == 0.0 {
        return;
    }
    let diag_scale = a[(p, p)].re.abs() + a[(q, q)].re.abs();
    if mag <= f64::EPSILON * 1e-3 * diag_scale {
        a[(p, q)] = Complex64::zero();
        a[(q, p)] = Complex64::zero();
        return;
    }

    // Unitary D = diag(.., d_q = conj(e), ..) makes the pivot real: (D†AD)_pq = |h|.
    let d = (h / mag).conj();
    for k in 0..n {
        a[(k, q)] *= d;
        v[(k, q)] *= d;
    }
    for k in 0..n {
        a[(q, k)] *= d.conj();
    }

    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex64::zero();
    a[(q, p)] = Complex64::zero();
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Rotates each column so its largest entry is real and positive; makes
/// output independent of incidental phases.
fn fix_phases(vectors: &mut CMatrix) {
    let n = vectors.rows();
    for j in 0..vectors.cols() {
        let mut best = (0, 0.0);
        for i in 0..n {
            let m = vectors[(i, j)].norm();
            if m > best.1 + 1e-12 {
                best = (i, m);
            }
        }
        if best.1 == 0.0 {
            continue;
        }
        let phase = (vectors[(best.0, j)] / best.1).conj();
        for i in 0..n {
            vectors[(i, j)] *= phase;
        }
    }
}
