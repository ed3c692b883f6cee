use isr_core::io::FileScalar;
use isr_core::lift::{LiftReport, Residual};
use isr_core::symmetry::{Certificate, CertificateKind};
use isr_core::{CMatrix, Complex64, Matrix};
use serde_json::{json, Value};

pub fn complex(z: Complex64) -> String {
    z.write_value()
}

/// Fixed-precision text for display only.
pub fn short(z: Complex64) -> String {
    let r = |x: f64| {
        let t = format!("{x:.10}");
        let t = t.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    };
    if z.im.abs() < 1e-14 {
        r(z.re)
    } else {
        format!("{}{}{}i", r(z.re), if z.im < 0.0 { "-" } else { "+" }, r(z.im.abs()))
    }
}

/// JSON has no infinities; they are written as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn kind_name(k: CertificateKind) -> &'static str {
    match k {
        CertificateKind::PowerBlocks => "power-blocks",
        CertificateKind::SampledIsr => "sampled-reduction",
        CertificateKind::Commutant => "commutant",
        CertificateKind::Cospectral => "cospectral",
    }
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "kind": kind_name(c.kind),
        "k_max": c.k_max,
        "samples": c.samples.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        "residuals": c.residuals.iter().map(|&r| num(r)).collect::<Vec<_>>(),
        "max_residual": num(c.max_residual),
        "tolerance": num(c.tolerance),
        "exact": c.exact,
        "verdict": c.verdict,
    })
}

pub fn certificate_text(c: &Certificate) -> String {
    let scope = match c.kind {
        CertificateKind::PowerBlocks => format!("k = 1..{}", c.k_max.unwrap_or(0)),
        CertificateKind::SampledIsr if c.exact => "symbolic".to_string(),
        CertificateKind::SampledIsr => format!("{} samples", c.samples.len()),
        _ => String::new(),
    };
    let bound = if c.exact { "exact".to_string() } else { format!("bound {:.3e}", c.tolerance) };
    format!(
        "{:<18} {:<12} max residual {:.3e} ({bound}): {}",
        kind_name(c.kind),
        scope,
        c.max_residual,
        if c.verdict { "pass" } else { "FAIL" }
    )
}

pub fn residual_json(r: &Residual) -> Value {
    json!({ "name": r.name, "value": num(r.value), "bound": num(r.bound), "ok": r.ok() })
}

fn residual_text(r: &Residual) -> String {
    format!(
        "  {:<24} {:.3e}  (bound {:.3e}) {}",
        r.name,
        r.value,
        r.bound,
        if r.ok() { "ok" } else { "FAIL" }
    )
}

pub fn lift_report_json(r: &LiftReport) -> Value {
    json!({
        "passed": r.passed(),
        "residuals": r.residuals.iter().map(residual_json).collect::<Vec<_>>(),
        "eigenvector_consequence": r.eigenvector_consequence.as_ref().map(residual_json),
        "q_spectrum": r.q_spectrum.as_ref().map(|s| s.iter().map(|z| complex(*z)).collect::<Vec<_>>()),
        "spectrum_deviation": r.spectrum_deviation.as_ref().map(residual_json),
    })
}

pub fn lift_report_text(r: &LiftReport) -> Vec<String> {
    let mut out = vec!["residuals:".to_string()];
    out.extend(r.residuals.iter().map(residual_text));
    out.extend(r.eigenvector_consequence.iter().map(residual_text));
    out.extend(r.spectrum_deviation.iter().map(residual_text));
    out
}

pub fn matrix_rows<T>(m: &Matrix<T>, f: impl Fn(&T) -> String) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(&f).collect()).collect()
}

pub fn cmatrix_json(m: &CMatrix) -> Value {
    json!(matrix_rows(m, |z| complex(*z)))
}

/// Column-aligned rows.
pub fn table(rows: &[Vec<String>], indent: &str) -> Vec<String> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            format!("{indent}{}", cells.join("  "))
        })
        .collect()
}

pub fn floats(v: &[f64]) -> Vec<Value> {
    v.iter().map(|&x| num(x)).collect()
}

pub fn float_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(", ")
}
