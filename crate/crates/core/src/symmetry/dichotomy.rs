//! Classification of the eigenvectors of H against a latent symmetry.
//!
//! For a latent symmetry T and nondegenerate H, every eigenvector x either has
//! `x_S` as an eigenvector of T or vanishes on S.

use crate::error::Result;
use crate::isr::PartitionedOperator;
use crate::lift::normal_eigenpairs;
use crate::lift::JOINT_DIAG_SEED;
use crate::matrix::{vec_max_abs, vec_norm, Matrix};
use crate::numeric::hermitian_eigen;
use crate::scalar::{Complex64, Scalar};
use crate::tolerance::{EIGVEC_TOL, GROUPING_REL};

use super::check_dims;

#[derive(Clone, Copy, Debug)]
pub struct DichotomyOptions {
    /// Bound for `‖T x_S − t x_S‖_max` and for `‖x_S‖`, with x of unit length.
    pub tol: f64,
    /// Relative eigenvalue gap below which H counts as degenerate, times `1 + ‖H‖_max`.
    pub degeneracy_rel: f64,
}

impl Default for DichotomyOptions {
    fn default() -> Self {
        DichotomyOptions {
            tol: EIGVEC_TOL,
            degeneracy_rel: GROUPING_REL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigvecClass {
    /// `T x_S = t x_S`.
    Fulfills { t: Complex64, residual: f64 },
    /// `x_S = 0`.
    Vanishes { norm: f64 },
    Neither { norm: f64, residual: f64 },
}

#[derive(Clone, Debug)]
pub struct EigvecEntry {
    pub eigenvalue: f64,
    pub vector: Vec<Complex64>,
    pub class: EigvecClass,
}

#[derive(Clone, Debug)]
pub struct DichotomyReport {
    pub entries: Vec<EigvecEntry>,
    /// H has numerically repeated eigenvalues; eigenvectors are then not
    /// unique and the falsification flag is disabled.
    pub degenerate: bool,
    /// `σ(H) ∩ σ(H_S̄S̄) = ∅` up to the degeneracy gap.
    pub disjoint_spectra: bool,
    /// Every eigenvalue of T is simple.
    pub t_simple: bool,
    /// Some eigenvector is in neither class although H is nondegenerate.
    pub falsified: bool,
}

impl DichotomyReport {
    pub fn count(&self, f: impl Fn(&EigvecClass) -> bool) -> usize {
        self.entries.iter().filter(|e| f(&e.class)).count()
    }
}

pub fn eigenvector_dichotomy<S: Scalar>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    opts: DichotomyOptions,
) -> Result<DichotomyReport> {
    check_dims(p, t)?;
    let pn = p.to_numeric();
    let h = pn.h();
    let gap = opts.degeneracy_rel * (1.0 + h.max_abs());
    let eig = hermitian_eigen(h)?;
    let degenerate = eig.min_gap() <= gap;

    let disjoint_spectra = if pn.complement().is_empty() {
        true
    } else {
        let inner = hermitian_eigen(&pn.h_cc())?;
        eig.values
            .iter()
            .all(|a| inner.values.iter().all(|b| (a - b).abs() > gap))
    };

    let tc = t.to_c64();
    let t_gap = GROUPING_REL * (1.0 + tc.max_abs());
    let mut t_values: Vec<Complex64> = Vec::new();
    let mut t_simple = true;
    for (z, _) in normal_eigenpairs(&tc, JOINT_DIAG_SEED)? {
        if t_values.iter().any(|w| (w - z).norm() <= t_gap) {
            t_simple = false;
        } else {
            t_values.push(z);
        }
    }

    let entries: Vec<EigvecEntry> = (0..pn.dim())
        .map(|k| {
            let x = eig.vector(k);
            let xs = pn.restrict(&x);
            let norm = vec_norm(&xs);
            let class = if norm <= opts.tol {
                EigvecClass::Vanishes { norm }
            } else {
                let txs = tc.mul_vec(&xs);
                let (t, residual) = t_values
                    .iter()
                    .map(|&tv| {
                        let r: Vec<Complex64> = txs.iter().zip(&xs).map(|(a, b)| a - tv * b).collect();
                        (tv, vec_max_abs(&r))
                    })
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap_or((Complex64::new(0.0, 0.0), f64::INFINITY));
                if residual <= opts.tol {
                    EigvecClass::Fulfills { t, residual }
                } else {
                    EigvecClass::Neither { norm, residual }
                }
            };
            EigvecEntry {
                eigenvalue: eig.values[k],
                vector: x,
                class,
            }
        })
        .collect();
    let falsified = !degenerate && entries.iter().any(|e| matches!(e.class, EigvecClass::Neither { .. }));
    Ok(DichotomyReport {
        entries,
        degenerate,
        disjoint_spectra,
        t_simple,
        falsified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Ring};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn exchange_eigenvectors_are_even_or_odd() {
        let p_mat = qm(&[&[0, 1], &[1, 0]]);
        let p = PartitionedOperator::new(p_mat.clone(), vec![0, 1], 0.0).unwrap();
        let r = eigenvector_dichotomy(&p, &p_mat, DichotomyOptions::default()).unwrap();
        assert!(!r.degenerate && !r.falsified && r.t_simple);
        let ts: Vec<f64> = r
            .entries
            .iter()
            .map(|e| match e.class {
                EigvecClass::Fulfills { t, .. } => t.re,
                _ => panic!("unexpected class {:?}", e.class),
            })
            .collect();
        assert!((ts[0] + 1.0).abs() < 1e-12 && (ts[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_class() {
        // P3 with S = {1, 3}: the eigenvector for 0 is (1, 0, -1) and the others are
        // symmetric; S = {2} sees the middle entry which vanishes for eigenvalue 0.
        let h = qm(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
        let p = PartitionedOperator::new(h, vec![1], 0.0).unwrap();
        let r = eigenvector_dichotomy(&p, &qm(&[&[1]]), DichotomyOptions::default()).unwrap();
        assert_eq!(r.count(|c| matches!(c, EigvecClass::Vanishes { .. })), 1);
        assert_eq!(r.count(|c| matches!(c, EigvecClass::Fulfills { .. })), 2);
        assert!(!r.falsified);
    }

    #[test]
    fn non_symmetry_is_flagged() {
        let h = qm(&[&[0, 1, 0], &[1, 0, 2], &[0, 2, 0]]);
        let p = PartitionedOperator::new(h, vec![0, 2], 0.0).unwrap();
        let r = eigenvector_dichotomy(&p, &qm(&[&[0, 1], &[1, 0]]), DichotomyOptions::default()).unwrap();
        assert!(r.falsified);
    }
}
