//! Field-specific pieces of each command. Exact fields get symbolic output;
//! the float field falls back to pointwise evaluation.

use isr_core::exact::RatFun;
use isr_core::io::{AnyMatrix, FileScalar};
use isr_core::isr::{isr_exact, real_roots, reduced_char_poly, spectral_identity, PartitionedOperator};
use isr_core::lift::{lift_exact_or_numeric, lift_symmetry, LiftOutcome, LiftedSymmetry};
use isr_core::symmetry::{check_isr_commutation_exact, Certificate};
use isr_core::{Complex64, ExactField, Gaussian, Matrix, Rational, Result};
use serde_json::{json, Value};

use crate::render;

pub trait Backend: FileScalar {
    fn from_any(m: AnyMatrix) -> Option<Matrix<Self>>;

    /// Entries of `R_S(H, λ)` as `num / den` strings.
    fn reduction(_p: &PartitionedOperator<Self>) -> Option<Result<Matrix<String>>> {
        None
    }

    /// Characteristic polynomials, the determinant identity and the reduced spectrum.
    fn exact_spectrum(_p: &PartitionedOperator<Self>) -> Option<Result<Value>> {
        None
    }

    fn exact_commutation(_p: &PartitionedOperator<Self>, _t: &Matrix<Self>) -> Option<Result<Certificate>> {
        None
    }

    fn lift(p: &PartitionedOperator<Self>, t: &Matrix<Self>, k_max: Option<usize>, tol: f64) -> Result<LiftData>;
}

/// A successful lift with Q already serialized.
pub struct LiftData {
    pub q_file: String,
    pub json: Value,
    pub text: Vec<String>,
}

fn ratfun_strings<S: ExactField>(m: &Matrix<RatFun<S>>) -> Matrix<String> {
    m.map(|f| f.to_string())
}

fn exact_reduction<S: ExactField>(p: &PartitionedOperator<S>) -> Result<Matrix<String>> {
    isr_exact(p).map(|r| ratfun_strings(&r))
}

fn exact_spectrum<S: ExactField>(p: &PartitionedOperator<S>) -> Result<Value> {
    let id = spectral_identity(p)?;
    let reduced = reduced_char_poly(p)?;
    Ok(json!({
        "char_poly": id.char_h.to_string(),
        "char_poly_complement": id.char_complement.to_string(),
        "reduced_det": id.reduced_det.to_string(),
        "identity_holds": id.holds,
        "reduced_char_poly": reduced.to_string(),
        "spectrum": real_roots(&id.char_h),
        "spectrum_complement": real_roots(&id.char_complement),
        "reduced_spectrum": real_roots(&reduced),
    }))
}

fn exact_lift<S: ExactField + FileScalar>(
    p: &PartitionedOperator<S>,
    t: &Matrix<S>,
    k_max: Option<usize>,
    tol: f64,
) -> Result<LiftData> {
    Ok(match lift_exact_or_numeric(p, t, k_max, tol)? {
        LiftOutcome::Exact(l) => lift_data(&l, true),
        LiftOutcome::Numeric(l) => {
            let mut d = lift_data(&l, false);
            d.text.insert(0, "note: no exact eigen-decomposition of T; lifted in float mode".into());
            d
        }
    })
}

macro_rules! exact_backend {
    ($ty:ty, $variant:ident) => {
        impl Backend for $ty {
            fn from_any(m: AnyMatrix) -> Option<Matrix<Self>> {
                match m {
                    AnyMatrix::$variant(m) => Some(m),
                    _ => None,
                }
            }
            fn reduction(p: &PartitionedOperator<Self>) -> Option<Result<Matrix<String>>> {
                Some(exact_reduction(p))
            }
            fn exact_spectrum(p: &PartitionedOperator<Self>) -> Option<Result<Value>> {
                Some(exact_spectrum(p))
            }
            fn exact_commutation(p: &PartitionedOperator<Self>, t: &Matrix<Self>) -> Option<Result<Certificate>> {
                Some(check_isr_commutation_exact(p, t))
            }
            fn lift(p: &PartitionedOperator<Self>, t: &Matrix<Self>, k_max: Option<usize>, tol: f64) -> Result<LiftData> {
                exact_lift(p, t, k_max, tol)
            }
        }
    };
}

exact_backend!(Rational, Rational);
exact_backend!(Gaussian, Gaussian);

impl Backend for Complex64 {
    fn from_any(m: AnyMatrix) -> Option<Matrix<Self>> {
        match m {
            AnyMatrix::Float(m) => Some(m),
            _ => None,
        }
    }
    fn lift(p: &PartitionedOperator<Self>, t: &Matrix<Self>, k_max: Option<usize>, tol: f64) -> Result<LiftData> {
        lift_symmetry(p, t, k_max, tol).map(|l| lift_data(&l, false))
    }
}

fn lift_data<S: FileScalar>(l: &LiftedSymmetry<S>, exact: bool) -> LiftData {
    let b = &l.bundle;
    let groups: Vec<Value> = b
        .groups
        .iter()
        .map(|g| {
            json!({
                "t": g.value.write_value(),
                "d": g.generators.len(),
                "d_tilde": g.dim(),
                "r": g.residual.len(),
            })
        })
        .collect();
    let json = json!({
        "exact": exact,
        "certificate": render::certificate_json(&l.certificate),
        "groups": groups,
        "complement_dim": b.complement_dim,
        "checks": {
            "generator_error": b.generator_error,
            "cross_overlap": b.cross_overlap,
            "residual_on_s": b.residual_on_s,
            "krylov_eigen_residual": l.krylov_eigen_residual,
            "complement_residual": l.complement_residual,
        },
        "verification": render::lift_report_json(&l.report),
        "q": isr_core::io::write_matrix(&l.q),
    });
    let mut text = vec![format!(
        "lifted {} Q of size {n}x{n}",
        if exact { "exact" } else { "float" },
        n = l.q.rows()
    )];
    text.push("groups:".into());
    for g in &b.groups {
        text.push(format!(
            "  t = {:<24} d = {}  d~ = {}  r = {}",
            g.value.write_value(),
            g.generators.len(),
            g.dim(),
            g.residual.len()
        ));
    }
    text.push(format!("  |V| = {}", b.complement_dim));
    text.extend(render::lift_report_text(&l.report));
    LiftData {
        q_file: isr_core::io::write_matrix(&l.q),
        json,
        text,
    }
}
