//! Elimination kernels: fraction-free (Bareiss) determinants and solves,
//! Gauss–Jordan inversion, characteristic polynomials and nullspaces.

use super::poly::{poly_gcd, Poly};
use super::ratfun::RatFun;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Ring};

/// Row index in `from..rows` with the best pivot score in column `col`.
fn pick_pivot<T: Ring>(a: &Matrix<T>, from: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in from..a.rows() {
        let s = a[(i, col)].pivot_score();
        if s > 0.0 && best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Forward Bareiss sweep over the leading `n` columns of `a`, applied to all
/// columns. Returns `false` if a column has no nonzero pivot. Every division
/// is exact, so this runs in any integral domain.
fn bareiss_forward<T: Ring>(a: &mut Matrix<T>, n: usize, negate: &mut bool) -> bool {
    let width = a.cols();
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = pick_pivot(a, k, k) else {
            return false;
        };
        if p != k {
            a.swap_rows(p, k);
            *negate = !*negate;
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            let lead = a[(i, k)].clone();
            for j in k + 1..width {
                let v = pivot.clone() * a[(i, j)].clone() - lead.clone() * a[(k, j)].clone();
                a[(i, j)] = v.exact_div(&prev);
            }
            a[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    true
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det<T: Ring>(m: &Matrix<T>) -> Result<T> {
    m.ensure_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    if !bareiss_forward(&mut a, n, &mut negate) {
        return Ok(T::zero());
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Fraction-free solve of `A X = B`: returns `(d, Y)` with `A Y = d B` and
/// `d = ±det A`, so `X = Y / d` and `Y` stays in the ring.
pub fn bareiss_solve<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Result<(T, Matrix<T>)> {
    a.ensure_square()?;
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let m = b.cols();
    if n == 0 {
        return Ok((T::one(), Matrix::zeros(0, m)));
    }
    let mut aug = Matrix::from_fn(n, n + m, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    let mut negate = false;
    if !bareiss_forward(&mut aug, n, &mut negate) {
        return Err(Error::Singular);
    }
    let d = aug[(n - 1, n - 1)].clone();
    let mut y = Matrix::<T>::zeros(n, m);
    for c in 0..m {
        for i in (0..n).rev() {
            let mut acc = d.clone() * aug[(i, n + c)].clone();
            for j in i + 1..n {
                acc = acc - aug[(i, j)].clone() * y[(j, c)].clone();
            }
            y[(i, c)] = acc.exact_div(&aug[(i, i)]);
        }
    }
    Ok((d, y))
}

/// Determinant of a matrix of rational functions: each row is cleared of
/// denominators, the polynomial determinant is taken fraction-free, and the
/// row scalings are divided back out.
pub fn ratfun_det<S: Field>(m: &Matrix<RatFun<S>>) -> Result<RatFun<S>> {
    m.ensure_square()?;
    let n = m.rows();
    let mut scale = Poly::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let lcm = m.row(i).iter().fold(Poly::one(), |acc, e| {
            let g = poly_gcd(&acc, e.den());
            acc.clone() * e.den().div_rem(&g).0
        });
        rows.push(
            m.row(i)
                .iter()
                .map(|e| e.num().clone() * lcm.div_rem(e.den()).0)
                .collect::<Vec<_>>(),
        );
        scale = scale * lcm;
    }
    let polys = Matrix::from_rows(rows)?;
    let det = if n == 0 { Poly::one() } else { bareiss_det(&polys)? };
    Ok(RatFun::new(det, scale))
}

/// Gauss–Jordan inverse over a field.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    m.ensure_square()?;
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<F>::identity(n);
    for k in 0..n {
        let p = pick_pivot(&a, k, k).ok_or(Error::Singular)?;
        a.swap_rows(p, k);
        inv.swap_rows(p, k);
        let pinv = a[(k, k)].inv();
        for j in 0..n {
            a[(k, j)] = a[(k, j)].clone() * pinv.clone();
            inv[(k, j)] = inv[(k, j)].clone() * pinv.clone();
        }
        for i in 0..n {
            if i == k || a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone();
            for j in 0..n {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(k, j)].clone();
            }
        }
    }
    Ok(inv)
}

/// `det(λI − M)` by fraction-free elimination over polynomials.
pub fn char_poly<S: Field>(m: &Matrix<S>) -> Result<Poly<S>> {
    m.ensure_square()?;
    let shifted = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let c = Poly::constant(-m[(i, j)].clone());
        if i == j {
            c + Poly::lambda()
        } else {
            c
        }
    });
    bareiss_det(&shifted)
}

/// `det(λI − M)` by the Faddeev–LeVerrier recurrence; an independent route to [`char_poly`].
pub fn char_poly_faddeev<S: Field>(m: &Matrix<S>) -> Result<Poly<S>> {
    m.ensure_square()?;
    let n = m.rows();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut mk = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{n−k+1} I
        mk = m.try_mul(&mk)?;
        for i in 0..n {
            mk[(i, i)] = mk[(i, i)].clone() + coeffs[n - k + 1].clone();
        }
        let am = m.try_mul(&mk)?;
        let trace = (0..n).fold(S::zero(), |acc, i| acc + am[(i, i)].clone());
        coeffs[n - k] = -(trace / S::from_i64(k as i64));
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(a: &mut Matrix<F>) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(a, r, c) else {
            continue;
        };
        a.swap_rows(p, r);
        let pinv = a[(r, c)].inv();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * pinv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let cols = a.cols();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(r, free)].clone();
            }
            v
        })
        .collect()
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(&mut m.clone()).len()
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

    fn lam() -> RatFun<Rational> {
        RatFun::lambda()
    }

    #[test]
    fn det_examples() {
        assert_eq!(bareiss_det(&qm(&[&[0, 1], &[1, 0]])).unwrap(), q(-1));
        assert_eq!(bareiss_det(&Matrix::<Rational>::identity(5)).unwrap(), q(1));
        let m = Matrix::from_rows(vec![
            vec![lam(), RatFun::one()],
            vec![RatFun::one(), lam()],
        ])
        .unwrap();
        let expect = RatFun::from_poly(Poly::from_coeffs(vec![q(-1), q(0), q(1)]));
        assert_eq!(ratfun_det(&m).unwrap(), expect);
        assert!(bareiss_det(&qm(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn det_needs_row_search() {
        // zero leading pivot, zero column below it in the second step
        let m = qm(&[&[0, 2, 1], &[3, 0, 0], &[0, 4, 5]]);
        // cofactor expansion along row 2: −3·(2·5 − 1·4) = −18
        assert_eq!(bareiss_det(&m).unwrap(), q(-18));
        assert_eq!(bareiss_det(&qm(&[&[1, 2], &[2, 4]])).unwrap(), q(0));
    }

    #[test]
    fn inverse_examples() {
        let l = lam();
        let m = Matrix::from_rows(vec![vec![l.clone()]]).unwrap();
        assert_eq!(inverse(&m).unwrap()[(0, 0)], RatFun::one() / l.clone());
        assert_eq!(inverse(&Matrix::<Rational>::identity(3)).unwrap(), Matrix::identity(3));
        let m = Matrix::from_rows(vec![vec![l.clone(), RatFun::one()], vec![RatFun::one(), l.clone()]]).unwrap();
        let inv = inverse(&m).unwrap();
        let det = RatFun::from_poly(Poly::from_coeffs(vec![q(-1), q(0), q(1)]));
        let adj = Matrix::from_rows(vec![vec![l.clone(), -RatFun::one()], vec![-RatFun::one(), l]]).unwrap();
        assert_eq!(inv, adj.scale(&(RatFun::one() / det)));
        assert_eq!(inverse(&qm(&[&[1, 1], &[1, 1]])), Err(Error::Singular));
    }

    #[test]
    fn char_poly_examples() {
        let p = char_poly(&qm(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(p, Poly::from_coeffs(vec![q(-1), q(0), q(1)]));
        assert_eq!(char_poly(&Matrix::<Rational>::identity(3)).unwrap(), Poly::from_roots(&[q(1), q(1), q(1)]));
        assert_eq!(char_poly(&qm(&[&[0]])).unwrap(), Poly::lambda());
        assert_eq!(char_poly_faddeev(&qm(&[&[0, 1], &[1, 0]])).unwrap(), p);
    }

    #[test]
    fn solve_scaled() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        let b = qm(&[&[1], &[2]]);
        let (d, y) = bareiss_solve(&a, &b).unwrap();
        assert_eq!(a.try_mul(&y).unwrap(), b.scale(&d));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Ring::is_zero));
        }
        assert_eq!(rank(&m), 1);
    }
}
