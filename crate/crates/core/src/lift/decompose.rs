//! Spectral decomposition of a normal symmetry candidate.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::nullspace;
use crate::matrix::{inner, vec_max_abs, CMatrix, Matrix};
use crate::numeric::hermitian_eigen;
use crate::scalar::{Complex64, Scalar};
use crate::symmetry::{SpectralGroup, SymmetryCandidate};
use crate::tolerance::GROUPING_REL;

/// Seed for the random mixing angle of the joint diagonalization.
pub const JOINT_DIAG_SEED: u64 = 0x6a6f_696e_74;
const JOINT_DIAG_ATTEMPTS: usize = 16;

/// Eigenpairs of a normal matrix, one per dimension, as `(t, unit vector)`.
///
/// The Hermitian parts `(T + T†)/2` and `(T − T†)/2i` commute for normal T,
/// so the eigenvectors of `cos θ·A + sin θ·B` diagonalize both unless θ makes
/// distinct eigenvalues collide; that case is caught by the residual check
/// and retried with a new angle.
pub fn normal_eigenpairs(t: &CMatrix, seed: u64) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    t.ensure_square()?;
    let n = t.rows();
    let half = Complex64::new(0.5, 0.0);
    let a = CMatrix::from_fn(n, n, |i, j| (t[(i, j)] + t[(j, i)].conj()) * half);
    let b = CMatrix::from_fn(n, n, |i, j| (t[(i, j)] - t[(j, i)].conj()) * Complex64::new(0.0, -0.5));
    let bound = GROUPING_REL * (1.0 + t.max_abs());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..JOINT_DIAG_ATTEMPTS {
        let theta: f64 = rng.random_range(0.0..TAU);
        let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
        let m = CMatrix::from_fn(n, n, |i, j| a[(i, j)] * c + b[(i, j)] * s);
        let eig = hermitian_eigen(&m)?;
        let pairs: Vec<_> = (0..n)
            .map(|k| {
                let v = eig.vector(k);
                let tv = t.mul_vec(&v);
                (inner(&v, &tv), v, tv)
            })
            .collect();
        let res = pairs
            .iter()
            .map(|(tk, v, tv)| {
                let r: Vec<Complex64> = tv.iter().zip(v).map(|(x, y)| x - tk * y).collect();
                vec_max_abs(&r)
            })
            .fold(0.0, f64::max);
        if res <= bound {
            return Ok(pairs.into_iter().map(|(tk, v, _)| (tk, v)).collect());
        }
        worst = worst.min(res);
    }
    Err(Error::VerificationFailed {
        what: "joint diagonalization residual".into(),
        value: worst,
        bound,
    })
}

/// Clusters eigenpairs whose eigenvalues differ by at most `gap`. Each group
/// value is the mean of its members.
pub fn group_eigenpairs(pairs: Vec<(Complex64, Vec<Complex64>)>, gap: f64) -> Vec<(Complex64, Vec<Vec<Complex64>>)> {
    let mut groups: Vec<(Vec<Complex64>, Vec<Vec<Complex64>>)> = Vec::new();
    for (t, v) in pairs {
        match groups.iter_mut().find(|(ts, _)| (ts[0] - t).norm() <= gap) {
            Some((ts, vs)) => {
                ts.push(t);
                vs.push(v);
            }
            None => groups.push((vec![t], vec![v])),
        }
    }
    groups
        .into_iter()
        .map(|(ts, vs)| (ts.iter().sum::<Complex64>() / ts.len() as f64, vs))
        .collect()
}

/// Decomposes `T = Σ t_i Σ_j φ_ij φ_ij†` after checking normality and invertibility.
///
/// Exact mode snaps each numerically found `t_i` to the exact field, checks
/// that the exact eigenspaces fill the whole space and orthogonalizes them
/// without normalizing; failure yields [`Error::NoExactEigenbasis`].
pub fn spectral_decompose_normal<S: Scalar>(t: &Matrix<S>, tol: f64) -> Result<SymmetryCandidate<S>> {
    let mut cand = SymmetryCandidate::new(t.clone())?;
    if !cand.is_normal(tol) {
        return Err(Error::NotNormal(cand.normality_residual));
    }
    let tc = t.to_c64();
    let gap = GROUPING_REL * (1.0 + tc.max_abs());
    let groups = group_eigenpairs(normal_eigenpairs(&tc, JOINT_DIAG_SEED)?, gap);
    let smallest = groups.iter().map(|(v, _)| v.norm()).fold(f64::INFINITY, f64::min);
    if !cand.is_invertible(tol) || smallest <= gap {
        return Err(Error::SingularSymmetry(smallest.min(cand.det_magnitude)));
    }
    cand.groups = if S::EXACT {
        exact_groups(t, &groups)?
    } else {
        let groups: Vec<SpectralGroup<S>> = groups
            .into_iter()
            .map(|(v, vs)| SpectralGroup {
                value: from_c64(v),
                vectors: vs.into_iter().map(|x| x.into_iter().map(from_c64).collect()).collect(),
            })
            .collect();
        let recon = reconstruct(t.rows(), &groups).try_sub(t)?.max_abs();
        if recon > gap {
            return Err(Error::VerificationFailed {
                what: "spectral reconstruction".into(),
                value: recon,
                bound: gap,
            });
        }
        groups
    };
    Ok(cand)
}

fn from_c64<S: Scalar>(z: Complex64) -> S {
    S::from_c64(z).expect("numeric scalars accept floats")
}

/// `Σ_i t_i Σ_j φ φ† / ⟨φ, φ⟩`.
pub(crate) fn reconstruct<S: Scalar>(n: usize, groups: &[SpectralGroup<S>]) -> Matrix<S> {
    let mut m = Matrix::<S>::zeros(n, n);
    for g in groups {
        for v in &g.vectors {
            let w = g.value.clone() / inner(v, v);
            for i in 0..n {
                let vw = v[i].clone() * w.clone();
                for j in 0..n {
                    m[(i, j)] = m[(i, j)].clone() + vw.clone() * v[j].conj();
                }
            }
        }
    }
    m
}

fn exact_groups<S: Scalar>(t: &Matrix<S>, numeric: &[(Complex64, Vec<Vec<Complex64>>)]) -> Result<Vec<SpectralGroup<S>>> {
    let n = t.rows();
    let mut out = Vec::with_capacity(numeric.len());
    for (z, vs) in numeric {
        let value = S::snap(*z).ok_or_else(|| Error::NoExactEigenbasis(format!("eigenvalue {z} is not representable")))?;
        let shifted = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                t[(i, j)].clone() - value.clone()
            } else {
                t[(i, j)].clone()
            }
        });
        let basis = nullspace(&shifted);
        if basis.len() != vs.len() {
            return Err(Error::NoExactEigenbasis(format!(
                "eigenvalue {z} has exact eigenspace of dimension {} instead of {}",
                basis.len(),
                vs.len()
            )));
        }
        out.push(SpectralGroup {
            value,
            vectors: orthogonalize(basis),
        });
    }
    Ok(out)
}

/// Unnormalized Gram–Schmidt; exact in exact fields.
pub(crate) fn orthogonalize<S: Scalar>(vectors: Vec<Vec<S>>) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(vectors.len());
    for mut w in vectors {
        for b in &out {
            let c = inner(b, &w) / inner(b, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi = wi.clone() - c.clone() * bi.clone();
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;
    use crate::scalar::Rational;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn exchange_numeric() {
        let p = qm(&[&[0, 1], &[1, 0]]).to_c64();
        let c = spectral_decompose_normal(&p, 1e-10).unwrap();
        assert_eq!(c.groups.len(), 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for g in &c.groups {
            let v = &g.vectors[0];
            assert!((v[0].norm() - s).abs() < 1e-14);
            let sign = if g.value.re > 0.0 { 1.0 } else { -1.0 };
            assert!((g.value.re.abs() - 1.0).abs() < 1e-14);
            assert!((v[1] - v[0] * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn exchange_exact() {
        let p = qm(&[&[0, 1], &[1, 0]]);
        let c = spectral_decompose_normal(&p, 0.0).unwrap();
        let mut values: Vec<_> = c.groups.iter().map(|g| g.value.clone()).collect();
        values.sort();
        assert_eq!(values, vec![Rational::from_i64(-1), Rational::from_i64(1)]);
        assert_eq!(reconstruct(2, &c.groups), p);
    }

    #[test]
    fn identity_and_diagonal() {
        let c = spectral_decompose_normal(&CMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(c.groups.len(), 1);
        assert_eq!(c.groups[0].vectors.len(), 3);
        let d = spectral_decompose_normal(&qm(&[&[2, 0], &[0, 3]]), 0.0).unwrap();
        assert_eq!(d.groups.len(), 2);
    }

    #[test]
    fn rejects_non_normal_and_singular() {
        assert!(matches!(spectral_decompose_normal(&qm(&[&[1, 1], &[0, 1]]), 0.0), Err(Error::NotNormal(_))));
        assert!(matches!(
            spectral_decompose_normal(&qm(&[&[1, 0], &[0, 0]]), 0.0),
            Err(Error::SingularSymmetry(_))
        ));
    }

    #[test]
    fn three_cycle_has_no_rational_eigenbasis() {
        let c3 = qm(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert!(matches!(spectral_decompose_normal(&c3, 0.0), Err(Error::NoExactEigenbasis(_))));
        let n = spectral_decompose_normal(&c3.to_c64(), 1e-10).unwrap();
        assert_eq!(n.groups.len(), 3);
        assert!(n.groups.iter().all(|g| (g.value.norm() - 1.0).abs() < 1e-12));
    }
}
