//! Isospectral reduction `R_S(H, λ) = H_SS + H_SS̄ (λ − H_S̄S̄)⁻¹ H_S̄S`.
//!
//! Two modes share [`PartitionedOperator`]: the exact mode produces a matrix
//! of reduced rational functions in λ, the numeric mode evaluates the
//! reduction pointwise at a (complex) λ.

use crate::error::{Error, Result};
use crate::exact::{bareiss_solve, char_poly, poly_gcd, ratfun_det, to_ratfun, Poly, RatFun, RatFunMatrix};
use crate::matrix::{vec_max_abs, CMatrix, Matrix};
use crate::numeric::{hermitian_eigen, inverse_with_rcond, poly_roots};
use crate::scalar::{Complex64, ExactField, Ring, Scalar};
use crate::tolerance::{PAIRING_REL, SHIFT_RCOND};

/// Self-adjoint `H` with an index set `S` (0-based, strictly increasing) and its complement.
#[derive(Clone, Debug)]
pub struct PartitionedOperator<S> {
    h: Matrix<S>,
    subset: Vec<usize>,
    complement: Vec<usize>,
}

impl<S: Scalar> PartitionedOperator<S> {
    /// `tol` bounds `‖H − H†‖_max / (1 + ‖H‖_max)` in numeric mode; exact mode demands equality.
    pub fn new(h: Matrix<S>, mut subset: Vec<usize>, tol: f64) -> Result<Self> {
        h.ensure_square()?;
        let n = h.rows();
        let res = h.hermitian_residual();
        let ok = if S::EXACT { res == 0.0 } else { res <= tol * (1.0 + h.max_abs()) };
        if !ok {
            return Err(Error::NotSelfAdjoint(res));
        }
        if subset.is_empty() {
            return Err(Error::InvalidSubset("S must be nonempty".into()));
        }
        subset.sort_unstable();
        if subset.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("repeated index".into()));
        }
        if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidSubset(format!("index {} outside 1..{n}", bad + 1)));
        }
        let complement = (0..n).filter(|i| subset.binary_search(i).is_err()).collect();
        Ok(PartitionedOperator { h, subset, complement })
    }

    pub fn h(&self) -> &Matrix<S> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn h_ss(&self) -> Matrix<S> {
        self.h.submatrix(&self.subset, &self.subset)
    }

    pub fn h_sc(&self) -> Matrix<S> {
        self.h.submatrix(&self.subset, &self.complement)
    }

    pub fn h_cs(&self) -> Matrix<S> {
        self.h.submatrix(&self.complement, &self.subset)
    }

    pub fn h_cc(&self) -> Matrix<S> {
        self.h.submatrix(&self.complement, &self.complement)
    }

    /// `x_S`.
    pub fn restrict<T: Clone>(&self, x: &[T]) -> Vec<T> {
        self.subset.iter().map(|&i| x[i].clone()).collect()
    }

    /// N-vector equal to `y` on S and zero on S̄.
    pub fn pad(&self, y: &[S]) -> Vec<S> {
        let mut x = vec![S::zero(); self.dim()];
        for (k, &i) in self.subset.iter().enumerate() {
            x[i] = y[k].clone();
        }
        x
    }

    pub fn to_numeric(&self) -> PartitionedOperator<Complex64> {
        PartitionedOperator {
            h: self.h.to_c64(),
            subset: self.subset.clone(),
            complement: self.complement.clone(),
        }
    }
}

/// Exact reduction as a matrix of rational functions in λ.
///
/// `(λ − H_S̄S̄) Y = d · H_S̄S` is solved fraction-free over polynomials, so
/// every entry is assembled as one polynomial over the common denominator `d`
/// before reduction.
pub fn isr_exact<S: ExactField>(p: &PartitionedOperator<S>) -> Result<RatFunMatrix<S>> {
    let h_ss = p.h_ss();
    if p.complement.is_empty() {
        return Ok(to_ratfun(&h_ss));
    }
    let h_cc = p.h_cc();
    let shifted = Matrix::from_fn(h_cc.rows(), h_cc.cols(), |i, j| {
        let c = Poly::constant(-h_cc[(i, j)].clone());
        if i == j {
            c + Poly::lambda()
        } else {
            c
        }
    });
    let rhs = p.h_cs().map(|x| Poly::constant(x.clone()));
    let (d, y) = bareiss_solve(&shifted, &rhs)?;
    let h_sc = p.h_sc();
    let s = h_ss.rows();
    Ok(Matrix::from_fn(s, s, |i, j| {
        let mut num = d.clone() * Poly::constant(h_ss[(i, j)].clone());
        for k in 0..h_sc.cols() {
            if !h_sc[(i, k)].is_zero() {
                num = num + Poly::constant(h_sc[(i, k)].clone()) * y[(k, j)].clone();
            }
        }
        RatFun::new(num, d.clone())
    }))
}

/// Numeric value of the reduction at `lambda`.
pub fn isr_eval<S: Scalar>(p: &PartitionedOperator<S>, lambda: Complex64) -> Result<CMatrix> {
    let h_ss = p.h_ss().to_c64();
    if p.complement.is_empty() {
        return Ok(h_ss);
    }
    let z = shifted_solve(p, lambda, &p.h_cs().to_c64())?;
    h_ss.try_add(&p.h_sc().to_c64().try_mul(&z)?)
}

/// `(λ − H_S̄S̄)⁻¹ B`, refusing numerically singular shifts.
fn shifted_solve<S: Scalar>(p: &PartitionedOperator<S>, lambda: Complex64, b: &CMatrix) -> Result<CMatrix> {
    let h_cc = p.h_cc().to_c64();
    let shifted = CMatrix::from_fn(h_cc.rows(), h_cc.cols(), |i, j| {
        if i == j {
            lambda - h_cc[(i, j)]
        } else {
            -h_cc[(i, j)]
        }
    });
    let (inv, rcond) = inverse_with_rcond(&shifted)?;
    match inv {
        Some(inv) if rcond >= SHIFT_RCOND => inv.try_mul(b),
        _ => Err(Error::SingularShift { lambda, rcond }),
    }
}

/// Exact form of `σ(R_S(H)) = σ(H) − σ(H_S̄S̄)`.
#[derive(Clone, Debug)]
pub struct SpectralIdentity<S> {
    pub char_h: Poly<S>,
    pub char_complement: Poly<S>,
    /// `det(λI − R_S(H, λ))`, reduced.
    pub reduced_det: RatFun<S>,
    /// `char_h = char_complement · reduced_det` as rational functions.
    pub holds: bool,
}

pub fn spectral_identity<S: ExactField>(p: &PartitionedOperator<S>) -> Result<SpectralIdentity<S>> {
    let r = isr_exact(p)?;
    let n = r.rows();
    let shifted = Matrix::from_fn(n, n, |i, j| {
        let e = -r[(i, j)].clone();
        if i == j {
            e + RatFun::lambda()
        } else {
            e
        }
    });
    let reduced_det = ratfun_det(&shifted)?;
    let char_h = char_poly(p.h())?;
    let char_complement = char_poly(&p.h_cc())?;
    let holds = RatFun::from_poly(char_h.clone())
        == RatFun::from_poly(char_complement.clone()) * reduced_det.clone();
    Ok(SpectralIdentity {
        char_h,
        char_complement,
        reduced_det,
        holds,
    })
}

/// Monic polynomial whose roots are `σ(H) − σ(H_S̄S̄)` as a multiset.
pub fn reduced_char_poly<S: ExactField>(p: &PartitionedOperator<S>) -> Result<Poly<S>> {
    let ch = char_poly(p.h())?;
    let cc = char_poly(&p.h_cc())?;
    let g = poly_gcd(&ch, &cc);
    Ok(ch.div_rem(&g).0)
}

/// Real roots (with multiplicity, ascending) of a polynomial with real spectrum.
pub fn real_roots<S: ExactField>(poly: &Poly<S>) -> Vec<f64> {
    let mut out = Vec::new();
    for (factor, mult) in poly.square_free() {
        let coeffs: Vec<Complex64> = factor.coeffs().iter().map(Scalar::to_c64).collect();
        for z in poly_roots(&coeffs) {
            out.extend(std::iter::repeat_n(z.re, mult));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Nonlinear spectrum of the reduction via exact division of characteristic polynomials.
pub fn reduced_spectrum_exact<S: ExactField>(p: &PartitionedOperator<S>) -> Result<Vec<f64>> {
    Ok(real_roots(&reduced_char_poly(p)?))
}

/// Nonlinear spectrum via tolerance-paired multiset subtraction of eigenvalue lists.
///
/// Each eigenvalue of `H_S̄S̄` removes one matching eigenvalue of `H`. If the
/// candidates within `tol` are not themselves mutually within `tol`, the
/// pairing is reported as ambiguous instead of guessed.
pub fn reduced_spectrum_numeric<S: Scalar>(p: &PartitionedOperator<S>, tol: Option<f64>) -> Result<Vec<f64>> {
    let h = p.h().to_c64();
    let tol = tol.unwrap_or(PAIRING_REL * (1.0 + h.max_abs()));
    let mut full = hermitian_eigen(&h)?.values;
    if p.complement.is_empty() {
        return Ok(full);
    }
    let inner = hermitian_eigen(&p.h_cc().to_c64())?.values;
    for mu in inner {
        let candidates: Vec<usize> = (0..full.len()).filter(|&k| (full[k] - mu).abs() <= tol).collect();
        let Some(&first) = candidates.first() else {
            continue;
        };
        let (lo, hi) = candidates
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| (lo.min(full[k]), hi.max(full[k])));
        if hi - lo > tol {
            return Err(Error::PairingAmbiguous { value: mu, tol });
        }
        let best = candidates
            .iter()
            .copied()
            .min_by(|&a, &b| (full[a] - mu).abs().total_cmp(&(full[b] - mu).abs()))
            .unwrap_or(first);
        full.remove(best);
    }
    Ok(full)
}

/// Reduced eigenpair `R_S(H, λ) y = λ y` with the full eigenvector it came from.
#[derive(Clone, Debug)]
pub struct NonlinearEigenpair {
    pub lambda: Complex64,
    pub y: Vec<Complex64>,
    pub x: Option<Vec<Complex64>>,
    /// `‖R_S(H, λ) y − λ y‖_max`.
    pub residual: f64,
}

fn eig_residual(h: &CMatrix, lambda: Complex64, x: &[Complex64]) -> f64 {
    h.mul_vec(x)
        .iter()
        .zip(x)
        .map(|(hx, xi)| (hx - lambda * xi).norm())
        .fold(0.0, f64::max)
}

/// Projects an eigenvector of `H` onto S and checks the reduced eigen-equation.
/// `tol` is relative to `(1 + ‖H‖_max)·‖x‖_max`.
pub fn eigvec_project<S: Scalar>(
    p: &PartitionedOperator<S>,
    lambda: Complex64,
    x: &[Complex64],
    tol: f64,
) -> Result<NonlinearEigenpair> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for N = {}", x.len(), p.dim())));
    }
    let h = p.h().to_c64();
    let scale = (1.0 + h.max_abs()) * vec_max_abs(x).max(f64::MIN_POSITIVE);
    let res = eig_residual(&h, lambda, x);
    if res > tol * scale {
        return Err(Error::NotEigenpair(res));
    }
    let r = isr_eval(p, lambda).map_err(|e| match e {
        Error::SingularShift { lambda, .. } => Error::SharedEigenvalue(lambda),
        other => other,
    })?;
    let y = p.restrict(x);
    let residual = r
        .mul_vec(&y)
        .iter()
        .zip(&y)
        .map(|(ry, yi)| (ry - lambda * yi).norm())
        .fold(0.0, f64::max);
    let bound = tol * (1.0 + r.max_abs()) * vec_max_abs(x).max(f64::MIN_POSITIVE);
    if residual > bound {
        return Err(Error::VerificationFailed {
            what: "reduced eigen-equation residual".into(),
            value: residual,
            bound,
        });
    }
    Ok(NonlinearEigenpair {
        lambda,
        y,
        x: Some(x.to_vec()),
        residual,
    })
}

/// Rebuilds the full eigenvector from a reduced one: `x_S = y`,
/// `x_S̄ = (λ − H_S̄S̄)⁻¹ H_S̄S y`, then checks `H x = λ x`.
pub fn eigvec_reconstruct<S: Scalar>(
    p: &PartitionedOperator<S>,
    lambda: Complex64,
    y: &[Complex64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    if y.len() != p.subset.len() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for |S| = {}", y.len(), p.subset.len())));
    }
    let mut x = vec![Complex64::zero(); p.dim()];
    for (k, &i) in p.subset.iter().enumerate() {
        x[i] = y[k];
    }
    if !p.complement.is_empty() {
        let col = CMatrix::from_vec(y.len(), 1, y.to_vec())?;
        let z = shifted_solve(p, lambda, &p.h_cs().to_c64().try_mul(&col)?)?;
        for (k, &i) in p.complement.iter().enumerate() {
            x[i] = z[(k, 0)];
        }
    }
    let h = p.h().to_c64();
    let res = eig_residual(&h, lambda, &x);
    let bound = tol * (1.0 + h.max_abs()) * vec_max_abs(&x).max(f64::MIN_POSITIVE);
    if res > bound {
        return Err(Error::VerificationFailed {
            what: "reconstructed eigen-equation residual".into(),
            value: res,
            bound,
        });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn exchange(subset: Vec<usize>) -> PartitionedOperator<Rational> {
        let h = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        PartitionedOperator::new(h, subset, 0.0).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(2), q(0)]]).unwrap();
        assert!(matches!(PartitionedOperator::new(h, vec![0], 0.0), Err(Error::NotSelfAdjoint(_))));
        let h = Matrix::<Rational>::identity(2);
        assert!(PartitionedOperator::new(h.clone(), vec![], 0.0).is_err());
        assert!(PartitionedOperator::new(h.clone(), vec![2], 0.0).is_err());
        assert!(PartitionedOperator::new(h, vec![0, 0], 0.0).is_err());
    }

    #[test]
    fn exchange_reduces_to_inverse_lambda() {
        let r = isr_exact(&exchange(vec![0])).unwrap();
        assert_eq!(r[(0, 0)], RatFun::one() / RatFun::lambda());
        assert_eq!(r[(0, 0)].to_string(), "1 / λ");
    }

    #[test]
    fn full_subset_returns_h() {
        let p = exchange(vec![0, 1]);
        assert_eq!(isr_exact(&p).unwrap(), to_ratfun(p.h()));
        let id = spectral_identity(&p).unwrap();
        assert!(id.holds);
        assert_eq!(id.char_complement, Poly::one());
    }

    #[test]
    fn decoupled_diagonal() {
        let h = Matrix::from_rows(vec![vec![q(3), q(0)], vec![q(0), q(5)]]).unwrap();
        let p = PartitionedOperator::new(h, vec![0], 0.0).unwrap();
        assert_eq!(isr_exact(&p).unwrap()[(0, 0)], RatFun::constant(q(3)));
        let x = eigvec_reconstruct(&p, c(3.0), &[c(1.0)], 1e-12).unwrap();
        assert_eq!(x[1], c(0.0));
    }

    #[test]
    fn eval_examples() {
        let p = exchange(vec![0]);
        let r = isr_eval(&p, c(2.0)).unwrap();
        assert!((r[(0, 0)] - c(0.5)).norm() < 1e-15);
        assert!(matches!(isr_eval(&p, c(0.0)), Err(Error::SingularShift { .. })));
        let exact = isr_exact(&p).unwrap()[(0, 0)].eval(&q(2)).unwrap();
        assert_eq!(exact, Rational::new(1, 2));
    }

    #[test]
    fn identity_on_exchange() {
        let id = spectral_identity(&exchange(vec![0])).unwrap();
        assert!(id.holds);
        assert_eq!(id.char_h, Poly::from_coeffs(vec![q(-1), q(0), q(1)]));
        assert_eq!(id.char_complement, Poly::lambda());
        assert_eq!(reduced_spectrum_exact(&exchange(vec![0])).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn reduced_spectrum_small_cases() {
        let h = Matrix::from_rows(vec![vec![q(3)]]).unwrap();
        let p = PartitionedOperator::new(h, vec![0], 0.0).unwrap();
        assert_eq!(reduced_spectrum_exact(&p).unwrap(), vec![3.0]);
        let p = exchange(vec![0, 1]);
        assert_eq!(reduced_spectrum_numeric(&p, None).unwrap().len(), 2);
        let num = reduced_spectrum_numeric(&exchange(vec![0]), None).unwrap();
        assert!((num[0] + 1.0).abs() < 1e-14 && (num[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pairing_ambiguity_reported() {
        // σ(H) = {0, 1e-9·2}, σ(H_S̄S̄) = {1e-9}: two candidates that differ by more than tol
        let h = CMatrix::from_real(3, 3, &[0.0, 0.0, 0.0, 0.0, 2e-9, 0.0, 0.0, 0.0, 1e-9]).unwrap();
        let p = PartitionedOperator::new(h, vec![0, 1], 1e-12).unwrap();
        assert!(matches!(reduced_spectrum_numeric(&p, Some(1.5e-9)), Err(Error::PairingAmbiguous { .. })));
    }

    #[test]
    fn projection_of_exchange_eigenvector() {
        let p = exchange(vec![0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pair = eigvec_project(&p, c(1.0), &[c(s), c(s)], 1e-12).unwrap();
        assert!((pair.y[0] - c(s)).norm() < 1e-15);
        let x = eigvec_reconstruct(&p, c(1.0), &[c(1.0)], 1e-12).unwrap();
        assert!((x[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn shared_eigenvalue_path() {
        // H = diag(1) ⊕ [[0]] coupled trivially: x = e_2 with λ = 0 ∈ σ(H_S̄S̄), x_S = 0
        let h = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
        let p = PartitionedOperator::new(h, vec![0], 0.0).unwrap();
        let err = eigvec_project(&p, c(0.0), &[c(0.0), c(1.0)], 1e-12).unwrap_err();
        assert!(matches!(err, Error::SharedEigenvalue(_)));
    }
}
