//! Text formats for matrices, graphs and index sets. Indices are 1-based in
//! every file and on the command line.
//!
//! ```text
//! isr-matrix v1 <rows> <cols> <rational|gaussian|float>
//! <row> <col> <value>
//! ```
//!
//! ```text
//! isr-graph v1 <n> [loops]
//! <u> <v> [weight]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unlisted entries are zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::{split_complex, Complex64, Gaussian, Rational, Scalar};

/// Entry field of a matrix file, ordered by promotion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Rational,
    Gaussian,
    Float,
}

impl FieldKind {
    pub fn is_exact(self) -> bool {
        self != FieldKind::Float
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Rational => "rational",
            FieldKind::Gaussian => "gaussian",
            FieldKind::Float => "float",
        })
    }
}

impl FromStr for FieldKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" => Ok(FieldKind::Rational),
            "gaussian" => Ok(FieldKind::Gaussian),
            "float" => Ok(FieldKind::Float),
            _ => Err(format!("unknown field {s:?}")),
        }
    }
}

/// Scalars that can appear in a matrix file.
pub trait FileScalar: Scalar {
    const FIELD: FieldKind;
    fn write_value(&self) -> String;
    fn parse_value(s: &str) -> Result<Self, String>;
    fn wrap(m: Matrix<Self>) -> AnyMatrix;
}

impl FileScalar for Rational {
    const FIELD: FieldKind = FieldKind::Rational;
    fn write_value(&self) -> String {
        self.to_string()
    }
    fn parse_value(s: &str) -> Result<Self, String> {
        s.parse()
    }
    fn wrap(m: Matrix<Self>) -> AnyMatrix {
        AnyMatrix::Rational(m)
    }
}

impl FileScalar for Gaussian {
    const FIELD: FieldKind = FieldKind::Gaussian;
    fn write_value(&self) -> String {
        self.to_string()
    }
    fn parse_value(s: &str) -> Result<Self, String> {
        s.parse()
    }
    fn wrap(m: Matrix<Self>) -> AnyMatrix {
        AnyMatrix::Gaussian(m)
    }
}

/// Shortest round-trip text; the imaginary part is omitted when it is `+0`.
impl FileScalar for Complex64 {
    const FIELD: FieldKind = FieldKind::Float;
    fn write_value(&self) -> String {
        if self.im == 0.0 && self.im.is_sign_positive() {
            format!("{:?}", self.re)
        } else if self.im.is_sign_negative() {
            format!("{:?}-{:?}i", self.re, -self.im)
        } else {
            format!("{:?}+{:?}i", self.re, self.im)
        }
    }
    fn parse_value(s: &str) -> Result<Self, String> {
        let bad = || format!("not a float value: {s:?}");
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Complex64::new(num(s)?, 0.0));
        };
        let imag = |t: &str| match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => match t.strip_prefix('-') {
                Some(abs) => num(abs).map(|x| -x),
                None => num(t.trim_start_matches('+')),
            },
        };
        match split_complex(body) {
            Some(k) => Ok(Complex64::new(num(&body[..k])?, imag(&body[k..])?)),
            None => Ok(Complex64::new(0.0, imag(body)?)),
        }
    }
    fn wrap(m: Matrix<Self>) -> AnyMatrix {
        AnyMatrix::Float(m)
    }
}

/// A matrix over whichever field its file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Rational(Matrix<Rational>),
    Gaussian(Matrix<Gaussian>),
    Float(CMatrix),
}

impl AnyMatrix {
    pub fn field(&self) -> FieldKind {
        match self {
            AnyMatrix::Rational(_) => FieldKind::Rational,
            AnyMatrix::Gaussian(_) => FieldKind::Gaussian,
            AnyMatrix::Float(_) => FieldKind::Float,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Rational(m) => (m.rows(), m.cols()),
            AnyMatrix::Gaussian(m) => (m.rows(), m.cols()),
            AnyMatrix::Float(m) => (m.rows(), m.cols()),
        }
    }

    /// Converts to a field at least as general; never demotes.
    pub fn promote(self, field: FieldKind) -> AnyMatrix {
        match (self, field) {
            (AnyMatrix::Rational(m), FieldKind::Gaussian) => AnyMatrix::Gaussian(m.map(|x| Gaussian::from(x.clone()))),
            (AnyMatrix::Rational(m), FieldKind::Float) => AnyMatrix::Float(m.to_c64()),
            (AnyMatrix::Gaussian(m), FieldKind::Float) => AnyMatrix::Float(m.to_c64()),
            (m, _) => m,
        }
    }

    pub fn to_float(&self) -> CMatrix {
        match self {
            AnyMatrix::Rational(m) => m.to_c64(),
            AnyMatrix::Gaussian(m) => m.to_c64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            AnyMatrix::Rational(m) => write_matrix(m),
            AnyMatrix::Gaussian(m) => write_matrix(m),
            AnyMatrix::Float(m) => write_matrix(m),
        }
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_index(tok: &str, bound: usize, line: usize, what: &str) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} index {tok:?} is not a positive integer")))?;
    if v == 0 || v > bound {
        return Err(Error::parse(line, format!("{what} index {v} outside 1..{bound}")));
    }
    Ok(v - 1)
}

pub fn read_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() != 5 || tok[0] != "isr-matrix" || tok[1] != "v1" {
        return Err(Error::parse(hl, "expected header `isr-matrix v1 <rows> <cols> <field>`"));
    }
    let dim = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(hl, format!("bad dimension {t:?}")));
    let (rows, cols) = (dim(tok[2])?, dim(tok[3])?);
    let field: FieldKind = tok[4].parse().map_err(|e: String| Error::parse(hl, e))?;
    let body: Vec<(usize, &str)> = lines.collect();
    match field {
        FieldKind::Rational => read_entries::<Rational>(rows, cols, &body),
        FieldKind::Gaussian => read_entries::<Gaussian>(rows, cols, &body),
        FieldKind::Float => read_entries::<Complex64>(rows, cols, &body),
    }
}

fn read_entries<S: FileScalar>(rows: usize, cols: usize, body: &[(usize, &str)]) -> Result<AnyMatrix> {
    let mut m = Matrix::<S>::zeros(rows, cols);
    let mut seen = BTreeMap::new();
    for &(line, text) in body {
        let tok: Vec<&str> = text.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(Error::parse(line, "expected `<row> <col> <value>`"));
        }
        let i = parse_index(tok[0], rows, line, "row")?;
        let j = parse_index(tok[1], cols, line, "column")?;
        if let Some(first) = seen.insert((i, j), line) {
            return Err(Error::parse(line, format!("entry ({}, {}) already given on line {first}", i + 1, j + 1)));
        }
        m[(i, j)] = S::parse_value(tok[2]).map_err(|e| Error::parse(line, e))?;
    }
    Ok(S::wrap(m))
}

/// Writes the nonzero entries in row-major order. Float zeros with a negative
/// sign are kept so the round trip is bit-exact.
pub fn write_matrix<S: FileScalar>(m: &Matrix<S>) -> String {
    let mut out = format!("isr-matrix v1 {} {} {}\n", m.rows(), m.cols(), S::FIELD);
    let zero_text = S::zero().write_value();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m[(i, j)].write_value();
            if v != zero_text {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
            }
        }
    }
    out
}

/// Reads a graph as its symmetric weight matrix. Weights stay rational when
/// every weight parses as a rational number, otherwise the matrix is float.
pub fn read_graph(text: &str) -> Result<AnyMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    let loops = match tok.as_slice() {
        ["isr-graph", "v1", _] => false,
        ["isr-graph", "v1", _, "loops"] => true,
        _ => return Err(Error::parse(hl, "expected header `isr-graph v1 <n> [loops]`")),
    };
    let n: usize = tok[2].parse().map_err(|_| Error::parse(hl, format!("bad vertex count {:?}", tok[2])))?;

    let mut edges: Vec<(usize, usize, usize, &str)> = Vec::new();
    let mut seen = BTreeMap::new();
    for (line, text) in lines {
        let tok: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&tok.len()) {
            return Err(Error::parse(line, "expected `<u> <v> [weight]`"));
        }
        let u = parse_index(tok[0], n, line, "vertex")?;
        let v = parse_index(tok[1], n, line, "vertex")?;
        if u == v && !loops {
            return Err(Error::parse(line, format!("self-loop at {} needs the `loops` header flag", u + 1)));
        }
        if let Some(first) = seen.insert((u.min(v), u.max(v)), line) {
            return Err(Error::parse(line, format!("edge {} {} already given on line {first}", u + 1, v + 1)));
        }
        edges.push((line, u, v, tok.get(2).copied().unwrap_or("1")));
    }

    if edges.iter().all(|e| e.3.parse::<Rational>().is_ok()) {
        graph_matrix::<Rational>(n, &edges)
    } else {
        graph_matrix::<Complex64>(n, &edges)
    }
}

fn graph_matrix<S: FileScalar>(n: usize, edges: &[(usize, usize, usize, &str)]) -> Result<AnyMatrix> {
    let mut m = Matrix::<S>::zeros(n, n);
    for &(line, u, v, w) in edges {
        let w = S::parse_value(w).map_err(|e| Error::parse(line, e))?;
        if w.to_c64().im != 0.0 {
            return Err(Error::parse(line, "edge weights must be real"));
        }
        m[(u, v)] = w.clone();
        m[(v, u)] = w;
    }
    Ok(S::wrap(m))
}

/// Parses `1,3-5` into sorted 0-based indices below `n`.
pub fn parse_index_set(spec: &str, n: usize) -> Result<Vec<usize>> {
    let bad = |msg: String| Error::InvalidSubset(msg);
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let (a, b) = match part.split_once('-') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (part, part),
        };
        let num = |t: &str| {
            t.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= n)
                .ok_or_else(|| bad(format!("{t:?} is not an index in 1..{n}")))
        };
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad(format!("empty range {part:?}")));
        }
        out.extend(a - 1..b);
    }
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(bad(format!("repeated index in {spec:?}")));
    }
    Ok(out)
}

/// Inverse of [`parse_index_set`], compressing runs into ranges.
pub fn format_index_set(set: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < set.len() {
        let start = set[k];
        while k + 1 < set.len() && set[k + 1] == set[k] + 1 {
            k += 1;
        }
        parts.push(if set[k] == start {
            format!("{}", start + 1)
        } else {
            format!("{}-{}", start + 1, set[k] + 1)
        });
        k += 1;
    }
    parts.join(",")
}
