//! Seeded random instances: rational matrices, graphs and planted symmetries.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{inner, vec_norm, CMatrix, Matrix};
use crate::scalar::{Complex64, Rational, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with entries `p/q`, `|p| ≤ 5`, `q ≤ 3`, about a third of them zero.
pub fn random_symmetric_rational(n: usize, rng: &mut impl Rng) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.random_bool(0.3) {
                continue;
            }
            let v = Rational::new(rng.random_range(-5..=5), rng.random_range(1..=3));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// Erdős–Rényi adjacency matrix.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                m[(i, j)] = Rational::one();
                m[(j, i)] = Rational::one();
            }
        }
    }
    m
}

/// Nonempty random subset of `0..n` with at most `max_len` elements, sorted.
pub fn random_subset(n: usize, max_len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let len = rng.random_range(1..=max_len.min(n).max(1));
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..len {
        let j = rng.random_range(k..n);
        idx.swap(k, j);
    }
    let mut s = idx[..len].to_vec();
    s.sort_unstable();
    s
}

pub fn random_hermitian(n: usize, complex: bool, rng: &mut impl Rng) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
            let z = Complex64::new(rng.random_range(-1.0..1.0), im);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Orthonormal basis of `C^n` (or `R^n`) from Gram–Schmidt on random vectors.
pub fn random_orthonormal(n: usize, complex: bool, rng: &mut impl Rng) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut w: Vec<Complex64> = (0..n)
            .map(|_| {
                let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
                Complex64::new(rng.random_range(-1.0..1.0), im)
            })
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let norm = vec_norm(&w);
        if norm > 1e-3 {
            basis.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlantedKind {
    Permutation,
    Involution,
    DiagonalUnitary,
}

/// `H` commuting with a normal `Q0 = T ⊕ Q̄0` by construction.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub kind: PlantedKind,
    pub h: CMatrix,
    pub subset: Vec<usize>,
    pub t: CMatrix,
    pub q0: CMatrix,
}

/// Eigenpairs `(value, unit vector)`.
type Eigen = Vec<(Complex64, Vec<Complex64>)>;

fn assemble(n: usize, pairs: &[(Complex64, Vec<Complex64>)]) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for (t, v) in pairs {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += t * v[i] * v[j].conj();
            }
        }
    }
    m
}

fn permutation_eigen(s: usize, rng: &mut impl Rng) -> Eigen {
    let mut order: Vec<usize> = (0..s).collect();
    for k in (1..s).rev() {
        order.swap(k, rng.random_range(0..=k));
    }
    let mut out = Vec::with_capacity(s);
    let mut start = 0;
    while start < s {
        let len = rng.random_range(1..=s - start);
        let cycle = &order[start..start + len];
        // T e_{c_m} = e_{c_{m+1}}; v_k = Σ_m ω^{km} e_{c_m} has eigenvalue ω^{−k}
        for k in 0..len {
            let mut v = vec![Complex64::new(0.0, 0.0); s];
            for (m, &c) in cycle.iter().enumerate() {
                v[c] = Complex64::from_polar(1.0 / (len as f64).sqrt(), TAU * (k * m) as f64 / len as f64);
            }
            let value = if k == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, -TAU * k as f64 / len as f64)
            };
            out.push((value, v));
        }
        start += len;
    }
    out
}

fn involution_eigen(s: usize, rng: &mut impl Rng) -> Eigen {
    let basis = random_orthonormal(s, false, rng);
    let r = rng.random_range(0..=s);
    basis
        .into_iter()
        .enumerate()
        .map(|(k, v)| (Complex64::new(if k < r { -1.0 } else { 1.0 }, 0.0), v))
        .collect()
}

fn diagonal_unitary_eigen(s: usize, rng: &mut impl Rng) -> Eigen {
    let basis = random_orthonormal(s, true, rng);
    let palette: Vec<Complex64> = (0..rng.random_range(1..=s))
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..TAU)))
        .collect();
    basis
        .into_iter()
        .map(|v| (palette[rng.random_range(0..palette.len())], v))
        .collect()
}

/// Plants a symmetry of the given kind on a random `S` with `|S| ≤ max_s`.
///
/// `Q̄0` reuses T's eigenvalues (plus occasionally a fresh one) so that H
/// couples S to its complement; `H = Σ_i P_i A P_i` over the eigenprojectors
/// `P_i` of `Q0` with a random self-adjoint A.
pub fn planted_instance(n: usize, max_s: usize, kind: PlantedKind, rng: &mut impl Rng) -> PlantedInstance {
    let subset = random_subset(n, max_s, rng);
    let complement: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
    let s = subset.len();
    let t_eig = match kind {
        PlantedKind::Permutation => permutation_eigen(s, rng),
        PlantedKind::Involution => involution_eigen(s, rng),
        PlantedKind::DiagonalUnitary => diagonal_unitary_eigen(s, rng),
    };
    let complex = kind != PlantedKind::Involution;
    let mut values: Vec<Complex64> = t_eig.iter().map(|(t, _)| *t).collect();
    if rng.random_bool(0.3) {
        values.push(Complex64::new(0.5, 0.0));
    }
    let bar_basis = random_orthonormal(complement.len(), complex, rng);

    let pad = |idx: &[usize], v: &[Complex64]| {
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &i) in idx.iter().enumerate() {
            x[i] = v[k];
        }
        x
    };
    let mut q_pairs: Eigen = t_eig.iter().map(|(t, v)| (*t, pad(&subset, v))).collect();
    for v in &bar_basis {
        q_pairs.push((values[rng.random_range(0..values.len())], pad(&complement, v)));
    }

    let mut distinct: Vec<Complex64> = Vec::new();
    for (t, _) in &q_pairs {
        if !distinct.contains(t) {
            distinct.push(*t);
        }
    }
    let a = random_hermitian(n, complex, rng);
    let mut h = CMatrix::zeros(n, n);
    for d in &distinct {
        let members: Eigen = q_pairs
            .iter()
            .filter(|(t, _)| t == d)
            .map(|(_, v)| (Complex64::new(1.0, 0.0), v.clone()))
            .collect();
        let p = assemble(n, &members);
        h = h.try_add(&p.try_mul(&a).unwrap().try_mul(&p).unwrap()).unwrap();
    }
    let h = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    PlantedInstance {
        kind,
        h,
        subset,
        t: assemble(s, &t_eig),
        q0: assemble(n, &q_pairs),
    }
}

/// `T + ε·E` with a random complex E of unit max-norm.
pub fn perturb(t: &CMatrix, eps: f64, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(t.rows(), t.cols(), |i, j| {
        t[(i, j)] + Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * eps
    })
}
