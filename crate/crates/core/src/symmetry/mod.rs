//! Latent-symmetry detection.
//!
//! A matrix `T` on the index set S is a latent symmetry when it commutes with
//! the reduction `R_S(H, λ)` for every admissible λ, equivalently with every
//! SS-block `(H^k)_SS`. By Cayley–Hamilton `H^N` is a combination of
//! `H^0..H^{N−1}`, so checking `k ≤ N−1` decides the condition for all k.

mod commutant;
mod cospectral;
mod dichotomy;

pub use commutant::{commutant_basis, CommutantBasis, CommutantElement};
pub use cospectral::{cospectral_residual, find_cospectral_pairs, swap_automorphism, AutomorphismSearch};
pub use dichotomy::{eigenvector_dichotomy, DichotomyOptions, DichotomyReport, EigvecClass, EigvecEntry};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{bareiss_det, to_ratfun};
use crate::isr::{isr_eval, isr_exact, PartitionedOperator};
use crate::matrix::Matrix;
use crate::scalar::{Complex64, ExactField, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    PowerBlocks,
    SampledIsr,
    Commutant,
    Cospectral,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Highest power checked, for power-block certificates.
    pub k_max: Option<usize>,
    /// Sample points, for sampled-reduction certificates.
    pub samples: Vec<Complex64>,
    /// One residual per power (k = 1..) or per sample.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Bound the residual was compared against; 0 in exact mode.
    pub tolerance: f64,
    pub exact: bool,
    pub verdict: bool,
}

impl Certificate {
    fn from_residuals(
        kind: CertificateKind,
        residuals: Vec<f64>,
        tolerance: f64,
        exact: bool,
    ) -> Self {
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        let verdict = if exact { max_residual == 0.0 } else { max_residual <= tolerance };
        Certificate {
            kind,
            k_max: None,
            samples: Vec::new(),
            residuals,
            max_residual,
            tolerance: if exact { 0.0 } else { tolerance },
            exact,
            verdict,
        }
    }
}

/// A candidate `T` with the hypotheses the lift needs.
#[derive(Clone, Debug)]
pub struct SymmetryCandidate<S> {
    pub t: Matrix<S>,
    /// `‖TT† − T†T‖_max`.
    pub normality_residual: f64,
    /// `|det T|` (a nonzero exact determinant never reports 0).
    pub det_magnitude: f64,
    /// Spectral groups `(t_i, φ_{i,1..d_i})`; empty until decomposed.
    pub groups: Vec<SpectralGroup<S>>,
}

/// Distinct eigenvalue `t_i` of a normal matrix with an orthogonal eigenbasis.
/// Numeric vectors are unit length; exact ones are orthogonal but unnormalized.
#[derive(Clone, Debug)]
pub struct SpectralGroup<S> {
    pub value: S,
    pub vectors: Vec<Vec<S>>,
}

impl<S: Scalar> SymmetryCandidate<S> {
    pub fn new(t: Matrix<S>) -> Result<Self> {
        t.ensure_square()?;
        let normality_residual = t.normality_residual()?;
        let det_magnitude = bareiss_det(&t)?.magnitude();
        Ok(SymmetryCandidate {
            t,
            normality_residual,
            det_magnitude,
            groups: Vec::new(),
        })
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        if S::EXACT {
            self.normality_residual == 0.0
        } else {
            self.normality_residual <= tol * (1.0 + self.t.max_abs()).powi(2)
        }
    }

    pub fn is_invertible(&self, tol: f64) -> bool {
        if S::EXACT {
            self.det_magnitude > 0.0
        } else {
            let n = self.t.rows() as i32;
            self.det_magnitude > tol * (1.0 + self.t.max_abs()).powi(n)
        }
    }
}

/// Scale applied to H before taking powers in numeric mode; 1 in exact mode.
/// The max row sum bounds the spectral radius, so `(H/s)^k` stays bounded.
pub fn power_scale<S: Scalar>(h: &Matrix<S>) -> f64 {
    if S::EXACT {
        1.0
    } else {
        h.max_row_sum().max(1.0)
    }
}

/// `(H^k)_SS` for `k = 0..=k_max`.
pub fn power_blocks<S: Scalar>(p: &PartitionedOperator<S>, k_max: usize) -> Result<Vec<Matrix<S>>> {
    blocks_of(p, p.h().clone(), k_max)
}

/// `((H/s)^k)_SS` with `s` from [`power_scale`]. Commutation with T is
/// unaffected by the scaling.
pub fn normalized_power_blocks<S: Scalar>(p: &PartitionedOperator<S>, k_max: usize) -> Result<Vec<Matrix<S>>> {
    let s = power_scale(p.h());
    if s == 1.0 {
        return power_blocks(p, k_max);
    }
    let inv = S::from_c64(Complex64::new(1.0 / s, 0.0)).expect("numeric scalars accept floats");
    blocks_of(p, p.h().scale(&inv), k_max)
}

fn blocks_of<S: Scalar>(p: &PartitionedOperator<S>, h: Matrix<S>, k_max: usize) -> Result<Vec<Matrix<S>>> {
    let sub = p.subset();
    let mut out = Vec::with_capacity(k_max + 1);
    let mut power = Matrix::identity(h.rows());
    out.push(power.submatrix(sub, sub));
    for _ in 0..k_max {
        power = power.try_mul(&h)?;
        out.push(power.submatrix(sub, sub));
    }
    Ok(out)
}

pub(crate) fn check_dims<S>(p: &PartitionedOperator<S>, t: &Matrix<S>) -> Result<()>
where
    S: Scalar,
{
    let s = p.subset().len();
    if t.rows() != s || t.cols() != s {
        return Err(Error::DimensionMismatch(format!(
            "T is {}x{} but |S| = {s}",
            t.rows(),
            t.cols()
        )));
    }
    Ok(())
}

/// Certifies `[(H^k)_SS, T] = 0` for `k = 1..=k_max` (default `N−1`).
///
/// Numeric mode compares against `tol·(1 + ‖T‖_max)` on the normalized powers.
pub fn check_latent_symmetry<S: Scalar>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    k_max: Option<usize>,
    tol: f64,
) -> Result<Certificate> {
    check_dims(p, t)?;
    let k_max = k_max.unwrap_or(p.dim().saturating_sub(1));
    let blocks = normalized_power_blocks(p, k_max)?;
    let residuals = blocks[1..]
        .iter()
        .map(|b| b.commutator(t).map(|c| c.max_abs()))
        .collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::from_residuals(
        CertificateKind::PowerBlocks,
        residuals,
        tol * (1.0 + t.max_abs()),
        S::EXACT,
    );
    cert.k_max = Some(k_max);
    Ok(cert)
}

/// Seeded sample points off the real axis, where the shifted complement block
/// is safely invertible: `‖(λ − H_S̄S̄)⁻¹‖ ≤ 1/|Im λ|`.
pub fn sample_lambdas<S: Scalar>(p: &PartitionedOperator<S>, count: usize, seed: u64) -> Vec<Complex64> {
    let rho = p.h().max_row_sum().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let re = rng.random_range(-rho..=rho);
            let im = rng.random_range(0.25..=1.0) * rho;
            Complex64::new(re, if rng.random_bool(0.5) { im } else { -im })
        })
        .collect()
}

/// `‖[R_S(H, λ), T]‖_max` at each sample. The verdict bound is
/// `tol·(1 + ‖T‖_max)(1 + max ‖R‖_max)`.
pub fn check_isr_commutation<S: Scalar>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    samples: &[Complex64],
    tol: f64,
) -> Result<Certificate> {
    check_dims(p, t)?;
    let tc = t.to_c64();
    let mut residuals = Vec::with_capacity(samples.len());
    let mut r_norm = 0.0f64;
    for &lambda in samples {
        let r = isr_eval(p, lambda)?;
        r_norm = r_norm.max(r.max_abs());
        residuals.push(r.commutator(&tc)?.max_abs());
    }
    let bound = tol * (1.0 + t.max_abs()) * (1.0 + r_norm);
    let mut cert = Certificate::from_residuals(CertificateKind::SampledIsr, residuals, bound, false);
    cert.samples = samples.to_vec();
    Ok(cert)
}

/// Exact `[R_S(H, λ), T] = 0` as an identity of rational-function matrices.
pub fn check_isr_commutation_exact<S: ExactField>(p: &PartitionedOperator<S>, t: &Matrix<S>) -> Result<Certificate> {
    check_dims(p, t)?;
    let c = isr_exact(p)?.commutator(&to_ratfun(t))?;
    let nonzero = c.as_slice().iter().filter(|e| !e.is_zero()).count();
    Ok(Certificate::from_residuals(
        CertificateKind::SampledIsr,
        vec![if nonzero == 0 { 0.0 } else { nonzero as f64 }],
        0.0,
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    fn path3() -> Matrix<Rational> {
        qm(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]])
    }

    #[test]
    fn power_blocks_of_exchange() {
        let p = PartitionedOperator::new(qm(&[&[0, 1], &[1, 0]]), vec![0], 0.0).unwrap();
        let b = power_blocks(&p, 4).unwrap();
        let diag: Vec<Rational> = b.iter().map(|m| m[(0, 0)].clone()).collect();
        assert_eq!(diag, vec![q(1), q(0), q(1), q(0), q(1)]);
        assert_eq!(b[1], p.h_ss());
    }

    #[test]
    fn identity_always_certified() {
        let p = PartitionedOperator::new(path3(), vec![0, 2], 0.0).unwrap();
        let c = check_latent_symmetry(&p, &Matrix::identity(2), None, 0.0).unwrap();
        assert!(c.verdict);
        assert_eq!(c.k_max, Some(2));
    }

    #[test]
    fn automorphism_restricted_to_s_is_certified() {
        // the reflection of P3 fixes S = {1, 3} setwise
        let p = PartitionedOperator::new(path3(), vec![0, 2], 0.0).unwrap();
        let swap = qm(&[&[0, 1], &[1, 0]]);
        assert!(check_latent_symmetry(&p, &swap, None, 0.0).unwrap().verdict);
        assert!(check_isr_commutation_exact(&p, &swap).unwrap().verdict);
        let bad = qm(&[&[1, 0], &[0, 2]]);
        let c = check_latent_symmetry(&p, &bad, None, 0.0).unwrap();
        assert!(!c.verdict && c.max_residual > 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let p = PartitionedOperator::new(path3(), vec![0, 2], 0.0).unwrap();
        assert!(matches!(
            check_latent_symmetry(&p, &Matrix::identity(3), None, 0.0),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn scalar_t_commutes_with_one_by_one_reduction() {
        let p = PartitionedOperator::new(qm(&[&[0, 1], &[1, 0]]), vec![0], 0.0).unwrap();
        assert!(check_isr_commutation_exact(&p, &qm(&[&[7]])).unwrap().verdict);
    }

    #[test]
    fn sampled_commutation_numeric() {
        let p = PartitionedOperator::new(path3(), vec![0, 2], 0.0).unwrap();
        let samples = sample_lambdas(&p, 10, 3);
        assert!(samples.iter().all(|z| z.im.abs() >= 0.25));
        let swap = qm(&[&[0, 1], &[1, 0]]);
        let c = check_isr_commutation(&p, &swap, &samples, 1e-12).unwrap();
        assert!(c.verdict && c.max_residual < 1e-14);
    }
}
