//! Krylov spaces generated by the padded eigenvectors of a symmetry.

use crate::error::{Error, Result};
use crate::isr::PartitionedOperator;
use crate::matrix::{inner, vec_norm};
use crate::scalar::{Complex64, Scalar};
use crate::symmetry::SymmetryCandidate;
use crate::tolerance::{KRYLOV_RANK_REL, PROOF_CHECK};

/// Krylov data of one eigenvalue group `t_i`.
#[derive(Clone, Debug)]
pub struct KrylovGroup<S> {
    pub value: S,
    /// Eigenvectors of T padded with zeros outside S.
    pub generators: Vec<Vec<S>>,
    /// Further basis vectors of the Krylov space, orthogonal to the generators.
    pub residual: Vec<Vec<S>>,
}

impl<S: Clone> KrylovGroup<S> {
    /// `d̃_i`.
    pub fn dim(&self) -> usize {
        self.generators.len() + self.residual.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vec<S>> {
        self.generators.iter().chain(&self.residual)
    }
}

#[derive(Clone, Debug)]
pub struct KrylovBundle<S> {
    pub groups: Vec<KrylovGroup<S>>,
    /// `|V| = N − Σ d̃_i`.
    pub complement_dim: usize,
    /// Largest deviation of the generators from an orthogonal (numeric: orthonormal) set.
    pub generator_error: f64,
    /// Largest normalized overlap between bases of different groups.
    pub cross_overlap: f64,
    /// Largest `‖(Φ̄)_S‖ / ‖Φ̄‖` over residual vectors.
    pub residual_on_s: f64,
}

impl<S: Clone> KrylovBundle<S> {
    pub fn total_dim(&self) -> usize {
        self.groups.iter().map(KrylovGroup::dim).sum::<usize>() + self.complement_dim
    }
}

/// Normalized `|⟨a, b⟩| / (‖a‖‖b‖)`.
fn overlap<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    inner(a, b).magnitude() / (vec_norm(a) * vec_norm(b))
}

/// Removes the components of `w` along `basis`, twice in numeric mode.
fn project_out<S: Scalar>(w: &mut [S], basis: &[Vec<S>]) {
    let passes = if S::EXACT { 1 } else { 2 };
    for _ in 0..passes {
        for b in basis {
            let mut c = inner(b, w);
            if S::EXACT {
                c = c / inner(b, b);
            }
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi = wi.clone() - c.clone() * bi.clone();
            }
        }
    }
}

/// Builds `K̃_i = span{H^k Φ_ij}` for every group.
///
/// Each kept vector is multiplied by H and orthogonalized against the group's
/// basis so far, which reaches the same span as all powers up to `H^{N−1}`.
/// Numeric mode drops vectors whose orthogonalized norm is at most
/// `KRYLOV_RANK_REL · max(1, ‖H‖_∞)`.
pub fn build_krylov_bundle<S: Scalar>(p: &PartitionedOperator<S>, cand: &SymmetryCandidate<S>) -> Result<KrylovBundle<S>> {
    let h = p.h();
    let n = p.dim();
    let cut = KRYLOV_RANK_REL * h.max_row_sum().max(1.0);
    let mut groups = Vec::with_capacity(cand.groups.len());
    for g in &cand.groups {
        let generators: Vec<Vec<S>> = g.vectors.iter().map(|v| p.pad(v)).collect();
        let mut basis = generators.clone();
        let mut next = 0;
        while next < basis.len() && basis.len() < n {
            let mut w = h.mul_vec(&basis[next]);
            next += 1;
            project_out(&mut w, &basis);
            if S::EXACT {
                if w.iter().any(|x| !x.is_zero()) {
                    basis.push(w);
                }
            } else {
                let norm = vec_norm(&w);
                if norm > cut {
                    let inv = S::from_c64(Complex64::new(1.0 / norm, 0.0)).expect("numeric scalars accept floats");
                    basis.push(w.into_iter().map(|x| x * inv.clone()).collect());
                }
            }
        }
        let residual = basis.split_off(generators.len());
        groups.push(KrylovGroup {
            value: g.value.clone(),
            generators,
            residual,
        });
    }

    let mut generator_error = 0.0f64;
    for g in &groups {
        for (a, x) in g.generators.iter().enumerate() {
            if !S::EXACT {
                generator_error = generator_error.max((vec_norm(x) - 1.0).abs());
            }
            for y in &g.generators[a + 1..] {
                generator_error = generator_error.max(overlap(x, y));
            }
        }
    }
    let bound = if S::EXACT { 0.0 } else { PROOF_CHECK };
    if generator_error > bound {
        return Err(Error::VerificationFailed {
            what: "generator orthonormality".into(),
            value: generator_error,
            bound,
        });
    }

    let mut cross_overlap = 0.0f64;
    for a in 0..groups.len() {
        for b in a + 1..groups.len() {
            for x in groups[a].basis() {
                for y in groups[b].basis() {
                    let o = overlap(x, y);
                    cross_overlap = cross_overlap.max(o);
                    if o > bound {
                        return Err(Error::CrossGroupOverlap { a, b, overlap: o });
                    }
                }
            }
        }
    }

    let mut residual_on_s = 0.0f64;
    for (gi, g) in groups.iter().enumerate() {
        for (index, r) in g.residual.iter().enumerate() {
            let value = vec_norm(&p.restrict(r)) / vec_norm(r);
            residual_on_s = residual_on_s.max(value);
            if value > bound {
                return Err(Error::ResidualNotVanishing { group: gi, index, value });
            }
        }
    }

    let used: usize = groups.iter().map(KrylovGroup::dim).sum();
    if used > n {
        return Err(Error::VerificationFailed {
            what: "Krylov dimension excess".into(),
            value: (used - n) as f64,
            bound: 0.0,
        });
    }
    Ok(KrylovBundle {
        groups,
        complement_dim: n - used,
        generator_error,
        cross_overlap,
        residual_on_s,
    })
}
