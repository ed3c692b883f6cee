//! Extends a latent symmetry `T` on S to a normal `Q = T ⊕ Q̄` commuting with H.
//!
//! With `T = Σ t_i Σ_j φ_ij φ_ij†`, let `K̃_i` be the Krylov space of H generated
//! by the zero-padded `φ_ij`. The spaces are mutually orthogonal and their
//! parts outside the generators vanish on S, so
//! `Q = Σ_i t_i Π_{K̃_i}` has `Q_SS = T`, zero off-diagonal blocks, and
//! commutes with H because every `K̃_i` is H-invariant.

mod decompose;
mod krylov;

pub use decompose::{group_eigenpairs, normal_eigenpairs, spectral_decompose_normal, JOINT_DIAG_SEED};
pub use krylov::{build_krylov_bundle, KrylovBundle, KrylovGroup};

use crate::error::{Error, Result};
use crate::isr::PartitionedOperator;
use crate::matrix::{inner, vec_max_abs, Matrix};
use crate::numeric::hermitian_eigen;
use crate::scalar::{Complex64, ExactField, Scalar};
use crate::symmetry::{check_latent_symmetry, Certificate, SymmetryCandidate};
use crate::tolerance::{EIGVEC_TOL, GROUPING_REL};

#[derive(Clone, Debug)]
pub struct LiftedSymmetry<S> {
    pub q: Matrix<S>,
    pub candidate: SymmetryCandidate<S>,
    pub bundle: KrylovBundle<S>,
    pub certificate: Certificate,
    pub report: LiftReport,
    /// `max ‖Q b − t_i b‖_max / ‖b‖_max` over the basis of every `K̃_i`.
    pub krylov_eigen_residual: f64,
    /// `‖Q (I − Π)‖_max`, with Π the projector onto `⊕ K̃_i`.
    pub complement_residual: f64,
}

/// One checked quantity and the bound it must meet.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
}

impl Residual {
    pub fn ok(&self) -> bool {
        self.value <= self.bound
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    /// `[Q,H]`, `Q_SS − T`, `Q_SS̄`, `Q_S̄S`, `QQ† − Q†Q`, in that order; max-norms.
    pub residuals: Vec<Residual>,
    /// For nondegenerate H: largest `‖Q x − q x‖_max` over unit eigenvectors x of H.
    pub eigenvector_consequence: Option<Residual>,
    /// Spectrum of Q when it is normal, and its distance to `{t_i} ∪ {0}`.
    /// Only the constructed Q must meet this; other valid Q may have further
    /// eigenvalues on the complement, so it is not counted as a violation.
    pub q_spectrum: Option<Vec<Complex64>>,
    pub spectrum_deviation: Option<Residual>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().chain(&self.eigenvector_consequence).filter(|r| !r.ok())
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }
}

/// Recomputes every postcondition of the lift for a given Q. Exact inputs use
/// zero bounds for the algebraic residuals; the spectral checks are numeric.
pub fn verify_lift<S: Scalar>(p: &PartitionedOperator<S>, t: &Matrix<S>, q: &Matrix<S>, tol: f64) -> Result<LiftReport> {
    let n = p.dim();
    let s = p.subset().len();
    if q.rows() != n || q.cols() != n || t.rows() != s || t.cols() != s {
        return Err(Error::DimensionMismatch(format!(
            "Q is {}x{}, T is {}x{}, N = {n}, |S| = {s}",
            q.rows(),
            q.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let h = p.h();
    let (sub, comp) = (p.subset(), p.complement());
    let qn = q.max_abs();
    let hn = h.max_abs();
    let bound = |scale: f64| if S::EXACT { 0.0 } else { tol * scale };
    let residuals = vec![
        Residual {
            name: "commutator",
            value: q.commutator(h)?.max_abs(),
            bound: bound((1.0 + hn) * (1.0 + qn)),
        },
        Residual {
            name: "block",
            value: q.submatrix(sub, sub).try_sub(t)?.max_abs(),
            bound: bound(1.0 + t.max_abs()),
        },
        Residual {
            name: "upper",
            value: q.submatrix(sub, comp).max_abs(),
            bound: bound(1.0 + qn),
        },
        Residual {
            name: "lower",
            value: q.submatrix(comp, sub).max_abs(),
            bound: bound(1.0 + qn),
        },
        Residual {
            name: "normality",
            value: q.normality_residual()?,
            bound: bound((1.0 + qn) * (1.0 + qn)),
        },
    ];
    let normal = residuals[4].ok();

    let hc = h.to_c64();
    let qc = q.to_c64();
    let eig = hermitian_eigen(&hc)?;
    let eigenvector_consequence = (eig.min_gap() > GROUPING_REL * (1.0 + hn)).then(|| {
        let value = (0..n)
            .map(|k| {
                let x = eig.vector(k);
                let qx = qc.mul_vec(&x);
                let qk = inner(&x, &qx);
                let r: Vec<Complex64> = qx.iter().zip(&x).map(|(a, b)| a - qk * b).collect();
                vec_max_abs(&r)
            })
            .fold(0.0, f64::max);
        Residual {
            name: "eigenvector consequence",
            value,
            bound: EIGVEC_TOL * (1.0 + qn),
        }
    });

    let (q_spectrum, spectrum_deviation) = if normal {
        let tc = t.to_c64();
        let mut allowed: Vec<Complex64> = normal_eigenpairs(&tc, JOINT_DIAG_SEED)?.into_iter().map(|(z, _)| z).collect();
        allowed.push(Complex64::new(0.0, 0.0));
        let spectrum: Vec<Complex64> = normal_eigenpairs(&qc, JOINT_DIAG_SEED)?.into_iter().map(|(z, _)| z).collect();
        let value = spectrum
            .iter()
            .map(|z| allowed.iter().map(|a| (z - a).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        (
            Some(spectrum),
            Some(Residual {
                name: "spectrum of Q",
                value,
                bound: EIGVEC_TOL * (1.0 + qn),
            }),
        )
    } else {
        (None, None)
    };

    Ok(LiftReport {
        residuals,
        eigenvector_consequence,
        q_spectrum,
        spectrum_deviation,
    })
}

fn projector<S: Scalar>(n: usize, vectors: &[&Vec<S>]) -> Matrix<S> {
    let mut m = Matrix::<S>::zeros(n, n);
    for v in vectors {
        let w = S::one() / inner(v, v);
        for i in 0..n {
            let vw = v[i].clone() * w.clone();
            for j in 0..n {
                m[(i, j)] = m[(i, j)].clone() + vw.clone() * v[j].conj();
            }
        }
    }
    m
}

/// Certifies T, decomposes it, builds the Krylov bundle and assembles Q.
/// Every postcondition is verified before returning.
pub fn lift_symmetry<S: Scalar>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    k_max: Option<usize>,
    tol: f64,
) -> Result<LiftedSymmetry<S>> {
    let certificate = check_latent_symmetry(p, t, k_max, tol)?;
    if !certificate.verdict {
        return Err(Error::NotLatentSymmetry(certificate.max_residual));
    }
    let candidate = spectral_decompose_normal(t, tol)?;
    let bundle = build_krylov_bundle(p, &candidate)?;
    let n = p.dim();

    let mut q = Matrix::zeros(n, n);
    let mut all: Vec<&Vec<S>> = Vec::new();
    for g in &bundle.groups {
        let basis: Vec<&Vec<S>> = g.basis().collect();
        q = q.try_add(&projector(n, &basis).scale(&g.value))?;
        all.extend(basis);
    }

    let mut krylov_eigen_residual = 0.0f64;
    for g in &bundle.groups {
        for b in g.basis() {
            let qb = q.mul_vec(b);
            let r: Vec<S> = qb.into_iter().zip(b).map(|(x, y)| x - g.value.clone() * y.clone()).collect();
            krylov_eigen_residual = krylov_eigen_residual.max(vec_max_abs(&r) / vec_max_abs(b));
        }
    }
    let pi = projector(n, &all);
    let complement_residual = q.try_sub(&q.try_mul(&pi)?)?.max_abs();

    let report = verify_lift(p, t, &q, tol)?;
    let structural = [
        ("Krylov eigenvector residual", krylov_eigen_residual),
        ("complement residual", complement_residual),
    ];
    for (what, value) in structural {
        let bound = if S::EXACT { 0.0 } else { tol * (1.0 + q.max_abs()) };
        if value > bound {
            return Err(Error::VerificationFailed { what: what.into(), value, bound });
        }
    }
    if let Some(v) = report.violations().chain(report.spectrum_deviation.iter().filter(|r| !r.ok())).next() {
        return Err(Error::VerificationFailed {
            what: v.name.into(),
            value: v.value,
            bound: v.bound,
        });
    }
    Ok(LiftedSymmetry {
        q,
        candidate,
        bundle,
        certificate,
        report,
        krylov_eigen_residual,
        complement_residual,
    })
}

#[derive(Clone, Debug)]
pub enum LiftOutcome<S> {
    Exact(LiftedSymmetry<S>),
    /// T has no eigen-decomposition over the exact field.
    Numeric(LiftedSymmetry<Complex64>),
}

/// Exact lift when T decomposes over the exact field, otherwise a numeric lift
/// of the same data.
pub fn lift_exact_or_numeric<S: ExactField>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    k_max: Option<usize>,
    tol: f64,
) -> Result<LiftOutcome<S>> {
    match lift_symmetry(p, t, k_max, 0.0) {
        Ok(l) => Ok(LiftOutcome::Exact(l)),
        Err(Error::NoExactEigenbasis(_)) => {
            lift_symmetry(&p.to_numeric(), &t.to_c64(), k_max, tol).map(LiftOutcome::Numeric)
        }
        Err(e) => Err(e),
    }
}
