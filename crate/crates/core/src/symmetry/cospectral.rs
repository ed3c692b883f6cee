//! Cospectral vertex pairs: `S = {u, v}` with the exchange matrix as symmetry.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Complex64, Scalar};

use super::power_scale;

fn checked_powers<S: Scalar>(h: &Matrix<S>, tol: f64) -> Result<Vec<Matrix<S>>> {
    h.ensure_square()?;
    let res = h.hermitian_residual();
    if if S::EXACT { res != 0.0 } else { res > tol * (1.0 + h.max_abs()) } {
        return Err(Error::NotSelfAdjoint(res));
    }
    let s = power_scale(h);
    let hs = if s == 1.0 {
        h.clone()
    } else {
        h.scale(&S::from_c64(Complex64::new(1.0 / s, 0.0)).expect("numeric scalars accept floats"))
    };
    let n = h.rows();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut power = hs.clone();
    for _ in 1..n {
        out.push(power.clone());
        power = power.try_mul(&hs)?;
    }
    Ok(out)
}

fn pair_residual<S: Scalar>(powers: &[Matrix<S>], u: usize, v: usize) -> f64 {
    powers
        .iter()
        .map(|m| {
            let d = (m[(u, u)].clone() - m[(v, v)].clone()).magnitude();
            let o = (m[(u, v)].clone() - m[(v, u)].clone()).magnitude();
            d.max(o)
        })
        .fold(0.0, f64::max)
}

/// Largest `|(H^k)_uu − (H^k)_vv|` or `|(H^k)_uv − (H^k)_vu|` over `k = 1..N−1`,
/// on the normalized powers in numeric mode.
pub fn cospectral_residual<S: Scalar>(h: &Matrix<S>, u: usize, v: usize, tol: f64) -> Result<f64> {
    let n = h.rows();
    if u >= n || v >= n || u == v {
        return Err(Error::InvalidSubset(format!("pair ({}, {}) for N = {n}", u + 1, v + 1)));
    }
    Ok(pair_residual(&checked_powers(h, tol)?, u, v))
}

/// All pairs `u < v` for which swapping them is a latent symmetry. The
/// off-diagonal condition is checked for every input, which matters only for
/// complex Hermitian H.
pub fn find_cospectral_pairs<S: Scalar>(h: &Matrix<S>, tol: f64) -> Result<Vec<(usize, usize)>> {
    let powers = checked_powers(h, tol)?;
    let n = h.rows();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let r = pair_residual(&powers, u, v);
            if if S::EXACT { r == 0.0 } else { r <= tol } {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismSearch {
    /// `perm[i]` is the image of vertex i.
    Found(Vec<usize>),
    NotFound,
    /// Size above the search limit.
    Skipped,
}

/// Searches for a permutation π with `π(u) = v`, `π(v) = u` and
/// `H_{π(i)π(j)} = H_ij` by backtracking over all candidates.
pub fn swap_automorphism<S: Scalar>(h: &Matrix<S>, u: usize, v: usize, limit: usize, tol: f64) -> AutomorphismSearch {
    let n = h.rows();
    if n > limit {
        return AutomorphismSearch::Skipped;
    }
    let same = |a: &S, b: &S| {
        let d = (a.clone() - b.clone()).magnitude();
        if S::EXACT { d == 0.0 } else { d <= tol }
    };
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[u] = v;
    perm[v] = u;
    used[u] = true;
    used[v] = true;
    let order: Vec<usize> = [u, v].into_iter().chain((0..n).filter(|&i| i != u && i != v)).collect();
    for (k, &i) in order.iter().enumerate().take(2) {
        if !(0..=k).all(|m| {
            let j = order[m];
            same(&h[(i, j)], &h[(perm[i], perm[j])]) && same(&h[(j, i)], &h[(perm[j], perm[i])])
        }) {
            return AutomorphismSearch::NotFound;
        }
    }
    if extend(h, &order, 2, &mut perm, &mut used, &same) {
        AutomorphismSearch::Found(perm)
    } else {
        AutomorphismSearch::NotFound
    }
}

fn extend<S: Scalar>(
    h: &Matrix<S>,
    order: &[usize],
    k: usize,
    perm: &mut [usize],
    used: &mut [bool],
    same: &impl Fn(&S, &S) -> bool,
) -> bool {
    if k == order.len() {
        return true;
    }
    let i = order[k];
    for w in 0..perm.len() {
        if used[w] {
            continue;
        }
        perm[i] = w;
        let ok = order[..=k].iter().all(|&j| {
            same(&h[(i, j)], &h[(w, perm[j])]) && same(&h[(j, i)], &h[(perm[j], w)])
        });
        if ok {
            used[w] = true;
            if extend(h, order, k + 1, perm, used, same) {
                return true;
            }
            used[w] = false;
        }
    }
    perm[i] = usize::MAX;
    false
}
