//! Linear space of all `T` commuting with the power blocks.

use crate::error::Result;
use crate::exact::{nullspace, rank};
use crate::isr::PartitionedOperator;
use crate::matrix::{inner, vec_norm, Matrix};
use crate::numeric::svd_nullspace;
use crate::scalar::{Complex64, Scalar};
use crate::tolerance::NULLSPACE_REL;

use super::{normalized_power_blocks, SymmetryCandidate};

#[derive(Clone, Debug)]
pub struct CommutantElement<S> {
    pub matrix: Matrix<S>,
    /// Satisfies the normality hypothesis of a latent symmetry.
    pub normal: bool,
    pub invertible: bool,
}

#[derive(Clone, Debug)]
pub struct CommutantBasis<S> {
    /// The identity comes first.
    pub elements: Vec<CommutantElement<S>>,
}

impl<S> CommutantBasis<S> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Basis of `{T : [(H^k)_SS, T] = 0, k = 1..N−1}`.
///
/// Unknowns are the entries of T in row-major order. Numeric mode keeps the
/// right singular vectors below `NULLSPACE_REL · σ_max`.
pub fn commutant_basis<S: Scalar>(p: &PartitionedOperator<S>, tol: f64) -> Result<CommutantBasis<S>> {
    let s = p.subset().len();
    let blocks = normalized_power_blocks(p, p.dim().saturating_sub(1))?;
    let constraints = &blocks[1..];
    let m = s * s;
    let map = Matrix::from_fn(constraints.len() * m, m, |row, col| {
        let (k, a, c) = (row / m, (row % m) / s, row % s);
        let (x, y) = (col / s, col % s);
        let b = &constraints[k];
        let mut v = S::zero();
        if y == c {
            v = v + b[(a, x)].clone();
        }
        if a == x {
            v = v - b[(y, c)].clone();
        }
        v
    });

    let identity: Vec<S> = Matrix::<S>::identity(s).as_slice().to_vec();
    let vectors = if S::EXACT {
        exact_with_identity(identity, nullspace(&map))
    } else {
        numeric_with_identity(identity, svd_nullspace(&map.to_c64(), NULLSPACE_REL))
    };

    let elements = vectors
        .into_iter()
        .map(|v| {
            let matrix = Matrix::from_vec(s, s, v)?;
            let cand = SymmetryCandidate::new(matrix)?;
            Ok(CommutantElement {
                normal: cand.is_normal(tol),
                invertible: cand.is_invertible(tol),
                matrix: cand.t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutantBasis { elements })
}

/// Replaces one nullspace vector by the identity, keeping the span.
fn exact_with_identity<S: Scalar>(identity: Vec<S>, null: Vec<Vec<S>>) -> Vec<Vec<S>> {
    let mut out = vec![identity];
    let target = null.len();
    for v in null {
        if out.len() == target {
            break;
        }
        let mut cols = out.clone();
        cols.push(v.clone());
        if rank(&Matrix::from_columns(cols[0].len(), &cols)) == cols.len() {
            out.push(v);
        }
    }
    out
}

/// Gram–Schmidt with the normalized identity as the first vector.
fn numeric_with_identity<S: Scalar>(identity: Vec<S>, null: Vec<Vec<Complex64>>) -> Vec<Vec<S>> {
    let target = null.len();
    let id: Vec<Complex64> = identity.iter().map(Scalar::to_c64).collect();
    let n0 = vec_norm(&id);
    let mut basis: Vec<Vec<Complex64>> = vec![id.iter().map(|z| z / n0).collect()];
    for v in null {
        if basis.len() == target {
            break;
        }
        let mut w = v;
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = vec_norm(&w);
        if n > 1e-6 {
            basis.push(w.iter().map(|z| z / n).collect());
        }
    }
    basis
        .into_iter()
        .map(|v| v.into_iter().map(|z| S::from_c64(z).expect("numeric scalars accept floats")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Ring};
    use crate::symmetry::check_latent_symmetry;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn diagonal_h_has_diagonal_commutant() {
        let p = PartitionedOperator::new(qm(&[&[1, 0], &[0, 2]]), vec![0, 1], 0.0).unwrap();
        let b = commutant_basis(&p, 0.0).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.elements[0].matrix, Matrix::identity(2));
        for e in &b.elements {
            assert!(e.matrix[(0, 1)].is_zero() && e.matrix[(1, 0)].is_zero());
        }
        assert!(b.elements[0].normal && b.elements[0].invertible);
        assert!(!b.elements[1].invertible || b.elements[1].matrix[(0, 0)] != b.elements[1].matrix[(1, 1)]);
    }

    #[test]
    fn scalar_blocks_give_full_space() {
        // every (H^k)_SS vanishes
        let p = PartitionedOperator::new(qm(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]), vec![0, 1], 0.0).unwrap();
        let b = commutant_basis(&p, 0.0).unwrap();
        assert_eq!(b.dim(), 4);
        let pn = p.to_numeric();
        assert_eq!(commutant_basis(&pn, 1e-10).unwrap().dim(), 4);
    }

    #[test]
    fn members_are_certified() {
        let h = qm(&[&[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]]);
        let p = PartitionedOperator::new(h, vec![0, 3], 0.0).unwrap();
        let b = commutant_basis(&p, 0.0).unwrap();
        assert_eq!(b.dim(), 2);
        for e in &b.elements {
            assert!(check_latent_symmetry(&p, &e.matrix, None, 0.0).unwrap().verdict);
        }
        let pn = p.to_numeric();
        let bn = commutant_basis(&pn, 1e-10).unwrap();
        assert_eq!(bn.dim(), 2);
        for e in &bn.elements {
            assert!(check_latent_symmetry(&pn, &e.matrix, None, 1e-10).unwrap().verdict);
        }
    }
}
