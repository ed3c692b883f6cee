use isr_core::io::{format_index_set, parse_index_set, write_matrix, FileScalar};
use isr_core::isr::{isr_eval, reduced_spectrum_numeric, PartitionedOperator};
use isr_core::lift::verify_lift;
use isr_core::numeric::hermitian_eigen;
use isr_core::symmetry::{
    check_isr_commutation, check_latent_symmetry, commutant_basis, eigenvector_dichotomy, find_cospectral_pairs,
    sample_lambdas, swap_automorphism, AutomorphismSearch, DichotomyOptions, EigvecClass, SymmetryCandidate,
};
use isr_core::{Complex64, Error, Matrix};
use serde_json::{json, Value};

use crate::backend::Backend;
use crate::render::{self, complex, float_list, floats, num, table};
use crate::report::{Failure, Status};
use crate::Command;

pub struct Settings {
    pub tol: f64,
    pub k_max: Option<usize>,
    pub samples: usize,
    pub seed: u64,
}

pub struct Loaded<S> {
    pub h: Option<Matrix<S>>,
    pub t: Option<Matrix<S>>,
    pub q: Option<Matrix<S>>,
}

pub struct Outcome {
    pub status: Status,
    pub results: Value,
    pub text: Vec<String>,
    /// Set when the command ran to completion but the claim it checks failed.
    pub error: Option<Failure>,
}

impl Outcome {
    fn ok(results: Value, text: Vec<String>) -> Self {
        Outcome {
            status: Status::Ok,
            results,
            text,
            error: None,
        }
    }

    fn failing(mut self, f: Option<Failure>) -> Self {
        if let Some(f) = f {
            self.status = f.status;
            self.error = Some(f);
        }
        self
    }
}

fn required<S>(m: Option<Matrix<S>>, what: &str) -> Result<Matrix<S>, Failure> {
    m.ok_or_else(|| Failure::input("missing-input", format!("no {what} matrix")))
}

fn ensure_square<S>(h: &Matrix<S>) -> Result<(), Failure> {
    if h.rows() != h.cols() {
        return Err(Error::NotSquare(h.rows(), h.cols()).into());
    }
    Ok(())
}

fn partition<S: Backend>(h: Matrix<S>, subset: &str, tol: f64) -> Result<PartitionedOperator<S>, Failure> {
    ensure_square(&h)?;
    let s = parse_index_set(subset, h.rows())?;
    Ok(PartitionedOperator::new(h, s, tol)?)
}

fn matrix_strings<S: FileScalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    render::matrix_rows(m, FileScalar::write_value)
}

pub fn run<S: Backend>(cmd: &Command, set: &Settings, loaded: Loaded<S>) -> Result<Outcome, Failure> {
    let h = required(loaded.h, "input")?;
    match cmd {
        Command::Reduce { subset, lambda, .. } => reduce(partition(h, subset, set.tol)?, lambda, set),
        Command::Spectrum { subset, .. } => spectrum(partition(h, subset, set.tol)?),
        Command::Detect { subset, .. } => {
            let p = partition(h, subset, set.tol)?;
            match loaded.t {
                Some(t) => detect(p, t, set),
                None => commutant(p, set),
            }
        }
        Command::Cospectral { search_limit, .. } => cospectral(h, *search_limit, set),
        Command::Lift { subset, write_q, .. } => {
            let p = partition(h, subset, set.tol)?;
            let t = required(loaded.t, "T")?;
            let data = S::lift(&p, &t, set.k_max, set.tol)?;
            let mut results = data.json;
            if let Some(path) = write_q {
                std::fs::write(path, &data.q_file)
                    .map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
                results["q_path"] = json!(path.display().to_string());
            }
            Ok(Outcome::ok(results, data.text))
        }
        Command::Verify { subset, .. } => {
            let p = partition(h, subset, set.tol)?;
            verify(p, required(loaded.t, "T")?, required(loaded.q, "Q")?, set)
        }
        Command::Eigvecs { subset, strict, .. } => {
            let p = partition(h, subset, set.tol)?;
            eigvecs(p, required(loaded.t, "T")?, *strict)
        }
    }
}

fn reduce<S: Backend>(p: PartitionedOperator<S>, lambdas: &[String], set: &Settings) -> Result<Outcome, Failure> {
    let mut results = json!({ "subset": format_index_set(p.subset()), "size": p.subset().len() });
    let mut text = vec![format!("S = {{{}}}, |S| = {}", format_index_set(p.subset()), p.subset().len())];

    let mut points: Vec<Complex64> = lambdas
        .iter()
        .map(|s| Complex64::parse_value(s).map_err(|e| Failure::input("parse", format!("--lambda: {e}"))))
        .collect::<Result<_, _>>()?;

    if let Some(r) = S::reduction(&p) {
        let rows = render::matrix_rows(&r?, String::clone);
        text.push("R_S(H, λ) =".into());
        text.extend(table(&rows, "  "));
        results["reduction"] = json!(rows);
    } else if points.is_empty() {
        points = sample_lambdas(&p, set.samples, set.seed);
    }

    let mut evals = Vec::new();
    for &z in &points {
        let r = isr_eval(&p, z)?;
        text.push(format!("R_S(H, {}) =", complex(z)));
        text.extend(table(&render::matrix_rows(&r, |v| complex(*v)), "  "));
        evals.push(json!({ "lambda": complex(z), "value": render::cmatrix_json(&r) }));
    }
    if !evals.is_empty() {
        results["evaluations"] = json!(evals);
    }
    Ok(Outcome::ok(results, text))
}

fn spectrum<S: Backend>(p: PartitionedOperator<S>) -> Result<Outcome, Failure> {
    if let Some(v) = S::exact_spectrum(&p) {
        let v = v?;
        let list = |k: &str| {
            v[k].as_array()
                .map(|a| a.iter().filter_map(Value::as_f64).collect::<Vec<_>>())
                .unwrap_or_default()
        };
        let text = vec![
            format!("det(λ − H)             = {}", v["char_poly"].as_str().unwrap_or("")),
            format!("det(λ − H_S̄S̄)          = {}", v["char_poly_complement"].as_str().unwrap_or("")),
            format!("det(λ − R_S(H, λ))     = {}", v["reduced_det"].as_str().unwrap_or("")),
            format!("product identity holds: {}", v["identity_holds"]),
            format!("reduced polynomial     = {}", v["reduced_char_poly"].as_str().unwrap_or("")),
            format!("σ(H)         = [{}]", float_list(&list("spectrum"))),
            format!("σ(H_S̄S̄)      = [{}]", float_list(&list("spectrum_complement"))),
            format!("σ(R_S(H))    = [{}]", float_list(&list("reduced_spectrum"))),
        ];
        return Ok(Outcome::ok(v, text));
    }
    let full = hermitian_eigen(&p.h().to_c64())?.values;
    let inner = if p.complement().is_empty() {
        Vec::new()
    } else {
        hermitian_eigen(&p.h_cc().to_c64())?.values
    };
    let reduced = reduced_spectrum_numeric(&p, None)?;
    let text = vec![
        format!("σ(H)         = [{}]", float_list(&full)),
        format!("σ(H_S̄S̄)      = [{}]", float_list(&inner)),
        format!("σ(R_S(H))    = [{}]", float_list(&reduced)),
    ];
    let results = json!({
        "spectrum": floats(&full),
        "spectrum_complement": floats(&inner),
        "reduced_spectrum": floats(&reduced),
    });
    Ok(Outcome::ok(results, text))
}

fn detect<S: Backend>(p: PartitionedOperator<S>, t: Matrix<S>, set: &Settings) -> Result<Outcome, Failure> {
    let cand = SymmetryCandidate::new(t.clone())?;
    let mut certs = vec![check_latent_symmetry(&p, &t, set.k_max, set.tol)?];
    let samples = sample_lambdas(&p, set.samples, set.seed);
    certs.push(check_isr_commutation(&p, &t, &samples, set.tol)?);
    if let Some(c) = S::exact_commutation(&p, &t) {
        certs.push(c?);
    }
    let certified = certs.iter().all(|c| c.verdict);
    let normal = cand.is_normal(set.tol);
    let invertible = cand.is_invertible(set.tol);

    let mut text: Vec<String> = certs.iter().map(render::certificate_text).collect();
    text.push(format!(
        "T normal: {normal} (residual {:.3e}), invertible: {invertible} (|det| {:.3e})",
        cand.normality_residual, cand.det_magnitude
    ));
    text.push(format!("verdict: {}", if certified { "latent symmetry" } else { "not a latent symmetry" }));
    let results = json!({
        "certified": certified,
        "certificates": certs.iter().map(render::certificate_json).collect::<Vec<_>>(),
        "normal": normal,
        "invertible": invertible,
        "normality_residual": num(cand.normality_residual),
        "det_magnitude": num(cand.det_magnitude),
    });
    let fail = (!certified).then(|| {
        let worst = certs.iter().filter(|c| !c.verdict).map(|c| c.max_residual).fold(0.0, f64::max);
        Failure::from(Error::NotLatentSymmetry(worst))
    });
    Ok(Outcome::ok(results, text).failing(fail))
}

fn commutant<S: Backend>(p: PartitionedOperator<S>, set: &Settings) -> Result<Outcome, Failure> {
    let basis = commutant_basis(&p, set.tol)?;
    let mut text = vec![format!("symmetries on S = {{{}}}: dimension {}", format_index_set(p.subset()), basis.dim())];
    let mut elems = Vec::new();
    for (k, e) in basis.elements.iter().enumerate() {
        let rows = matrix_strings(&e.matrix);
        text.push(format!("T{} (normal: {}, invertible: {})", k + 1, e.normal, e.invertible));
        text.extend(table(&rows, "  "));
        elems.push(json!({
            "matrix": rows,
            "file": write_matrix(&e.matrix),
            "normal": e.normal,
            "invertible": e.invertible,
        }));
    }
    Ok(Outcome::ok(json!({ "dimension": basis.dim(), "basis": elems }), text))
}

fn cospectral<S: Backend>(h: Matrix<S>, limit: usize, set: &Settings) -> Result<Outcome, Failure> {
    ensure_square(&h)?;
    let pairs = find_cospectral_pairs(&h, set.tol)?;
    let mut text = vec![format!("{} cospectral pair(s) among {} vertices", pairs.len(), h.rows())];
    let mut out = Vec::new();
    for (u, v) in pairs {
        let (kind, perm) = match swap_automorphism(&h, u, v, limit, set.tol) {
            AutomorphismSearch::Found(perm) => ("automorphic", Some(perm)),
            AutomorphismSearch::NotFound => ("latent-only", None),
            AutomorphismSearch::Skipped => ("skipped", None),
        };
        text.push(format!("  {} {}  {kind}", u + 1, v + 1));
        out.push(json!({
            "pair": [u + 1, v + 1],
            "kind": kind,
            "automorphism": perm.map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>()),
        }));
    }
    Ok(Outcome::ok(json!({ "pairs": out, "search_limit": limit }), text))
}

fn verify<S: Backend>(p: PartitionedOperator<S>, t: Matrix<S>, q: Matrix<S>, set: &Settings) -> Result<Outcome, Failure> {
    let report = verify_lift(&p, &t, &q, set.tol)?;
    let text = render::lift_report_text(&report);
    let fail = report.violations().next().map(|r| {
        Failure::from(Error::VerificationFailed {
            what: r.name.to_string(),
            value: r.value,
            bound: r.bound,
        })
    });
    Ok(Outcome::ok(render::lift_report_json(&report), text).failing(fail))
}

fn eigvecs<S: Backend>(p: PartitionedOperator<S>, t: Matrix<S>, strict: bool) -> Result<Outcome, Failure> {
    let rep = eigenvector_dichotomy(&p, &t, DichotomyOptions::default())?;
    let mut text = Vec::new();
    let mut entries = Vec::new();
    for e in &rep.entries {
        let (class, detail) = match &e.class {
            EigvecClass::Fulfills { t, residual } => (
                "fulfills",
                json!({ "t": complex(*t), "residual": num(*residual) }),
            ),
            EigvecClass::Vanishes { norm } => ("vanishes", json!({ "norm": num(*norm) })),
            EigvecClass::Neither { norm, residual } => (
                "neither",
                json!({ "norm": num(*norm), "residual": num(*residual) }),
            ),
        };
        let note = match &e.class {
            EigvecClass::Fulfills { t, .. } => format!("T x_S = {} x_S", render::short(*t)),
            EigvecClass::Vanishes { .. } => "x_S = 0".to_string(),
            EigvecClass::Neither { norm, residual } => format!("neither (|x_S| {norm:.3e}, residual {residual:.3e})"),
        };
        text.push(format!("  {:>16.10}  {note}", e.eigenvalue));
        entries.push(json!({
            "eigenvalue": num(e.eigenvalue),
            "class": class,
            "detail": detail,
            "vector": e.vector.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        }));
    }
    text.push(format!(
        "degenerate: {}, disjoint spectra: {}, T simple: {}",
        rep.degenerate, rep.disjoint_spectra, rep.t_simple
    ));
    let results = json!({
        "entries": entries,
        "degenerate": rep.degenerate,
        "disjoint_spectra": rep.disjoint_spectra,
        "t_simple": rep.t_simple,
        "falsified": rep.falsified,
    });
    let fail = if rep.falsified {
        Some(Failure::new(
            Status::Rejected,
            "dichotomy-violated",
            "an eigenvector of H neither satisfies T x_S = t x_S nor vanishes on S",
        ))
    } else if rep.degenerate && strict {
        Some(Failure::new(
            Status::NumericRegime,
            "degenerate-spectrum",
            "H has a repeated eigenvalue, so its eigenvectors are not unique",
        ))
    } else {
        None
    };
    Ok(Outcome::ok(results, text).failing(fail))
}
