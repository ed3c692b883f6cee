//! `isr`: isospectral reductions, latent symmetry detection and lifting from the command line.

mod backend;
mod commands;
mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use isr_core::io::{read_graph, read_matrix, AnyMatrix, FieldKind};
use isr_core::tolerance::DEFAULT_TOL;
use isr_core::{Complex64, Gaussian, Rational};
use serde_json::json;

use backend::Backend;
use commands::{Loaded, Outcome, Settings};
use report::{Failure, Input, RunReport, Status};

#[derive(Parser, Debug)]
#[command(name = "isr", version, about = "Isospectral reductions and latent symmetries of self-adjoint matrices")]
struct Cli {
    /// Arithmetic: exact (rational or Gaussian-rational entries) or float.
    /// Defaults to exact whenever every input is exact.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Relative tolerance for float-mode checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Highest matrix power checked when certifying a symmetry (default N−1).
    #[arg(long, global = true)]
    kmax: Option<usize>,

    /// Number of sample points for the sampled commutation check.
    #[arg(long, global = true, default_value_t = 10)]
    samples: usize,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub(crate) enum Command {
    /// Print the reduction R_S(H, λ), symbolically in exact mode.
    Reduce {
        matrix: PathBuf,
        /// Index set S, 1-based, e.g. `1,3-5`.
        #[arg(short, long)]
        subset: String,
        /// Evaluate at these points (`2`, `0.5+1i`, `-i`, ...).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Vec<String>,
    },
    /// Spectra of H, of the complement block, and of the reduction.
    Spectrum {
        matrix: PathBuf,
        #[arg(short, long)]
        subset: String,
    },
    /// Certify a candidate T, or list a basis of all symmetries on S.
    Detect {
        matrix: PathBuf,
        #[arg(short, long)]
        subset: String,
        #[arg(short, long)]
        t: Option<PathBuf>,
    },
    /// Cospectral vertex pairs of a graph or matrix.
    Cospectral {
        input: PathBuf,
        /// Largest size for which the automorphism search runs.
        #[arg(long, default_value_t = 8)]
        search_limit: usize,
    },
    /// Lift a symmetry T on S to a normal Q commuting with H.
    Lift {
        matrix: PathBuf,
        #[arg(short, long)]
        subset: String,
        #[arg(short, long)]
        t: PathBuf,
        /// Also write Q as a matrix file.
        #[arg(long)]
        write_q: Option<PathBuf>,
    },
    /// Re-check a lifted Q, given as a matrix file or a `lift` report.
    Verify {
        matrix: PathBuf,
        #[arg(short, long)]
        subset: String,
        #[arg(short, long)]
        t: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Classify the eigenvectors of H against T.
    Eigvecs {
        matrix: PathBuf,
        #[arg(short, long)]
        subset: String,
        #[arg(short, long)]
        t: PathBuf,
        /// Treat a degenerate spectrum of H as an error.
        #[arg(long)]
        strict: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Spectrum { .. } => "spectrum",
            Command::Detect { .. } => "detect",
            Command::Cospectral { .. } => "cospectral",
            Command::Lift { .. } => "lift",
            Command::Verify { .. } => "verify",
            Command::Eigvecs { .. } => "eigvecs",
        }
    }

    /// Input files in order: H, then T, then Q.
    fn files(&self) -> Vec<(&Path, Role)> {
        match self {
            Command::Reduce { matrix, .. } | Command::Spectrum { matrix, .. } => vec![(matrix, Role::H)],
            Command::Detect { matrix, t, .. } => {
                let mut v = vec![(matrix.as_path(), Role::H)];
                v.extend(t.as_deref().map(|t| (t, Role::T)));
                v
            }
            Command::Cospectral { input, .. } => vec![(input, Role::Graph)],
            Command::Lift { matrix, t, .. } | Command::Eigvecs { matrix, t, .. } => {
                vec![(matrix, Role::H), (t, Role::T)]
            }
            Command::Verify { matrix, t, q, .. } => vec![(matrix, Role::H), (t, Role::T), (q, Role::Q)],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    H,
    T,
    Q,
    Graph,
}

fn color_enabled() -> bool {
    std::env::var("ISR_COLOR").is_ok_and(|v| v == "1")
}

fn paint(s: &str, status: Status) -> String {
    if !color_enabled() {
        return s.to_string();
    }
    let code = match status {
        Status::Ok => "32",
        Status::Rejected => "31",
        Status::InputError | Status::NumericRegime => "33",
    };
    format!("\x1b[{code}m{s}\x1b[0m")
}

fn parse_file(role: Role, text: &str) -> Result<AnyMatrix, Failure> {
    let trimmed = text.trim_start();
    let m = if role == Role::Graph && trimmed.starts_with("isr-graph") {
        read_graph(text)?
    } else if role == Role::Q && trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Failure::input("parse", e.to_string()))?;
        let q = v
            .pointer("/results/q")
            .and_then(|q| q.as_str())
            .ok_or_else(|| Failure::input("parse", "report has no results.q"))?;
        read_matrix(q)?
    } else {
        read_matrix(text)?
    };
    Ok(m)
}

struct Prepared {
    inputs: Vec<Input>,
    matrices: Vec<(Role, AnyMatrix)>,
}

fn load(cmd: &Command) -> Result<Prepared, (Vec<Input>, Failure)> {
    let mut inputs = Vec::new();
    let mut matrices = Vec::new();
    for (path, role) in cmd.files() {
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) => return Err((inputs, Failure::input("io", format!("{}: {e}", path.display())))),
        };
        inputs.push(Input::new(&path.display().to_string(), &bytes));
        let text = String::from_utf8_lossy(&bytes);
        match parse_file(role, &text) {
            Ok(m) => matrices.push((role, m)),
            Err(mut f) => {
                f.message = format!("{}: {}", path.display(), f.message);
                return Err((inputs, f));
            }
        }
    }
    Ok(Prepared { inputs, matrices })
}

fn resolve_field(mode: Option<Mode>, matrices: &[(Role, AnyMatrix)]) -> Result<FieldKind, Failure> {
    let widest = matrices.iter().map(|(_, m)| m.field()).max().unwrap_or(FieldKind::Rational);
    match mode {
        Some(Mode::Float) => Ok(FieldKind::Float),
        Some(Mode::Exact) if widest == FieldKind::Float => Err(Failure::input(
            "mode",
            "exact mode needs rational or Gaussian-rational entries in every input",
        )),
        _ => Ok(widest),
    }
}

fn split<S: Backend>(matrices: Vec<(Role, AnyMatrix)>, field: FieldKind) -> Loaded<S> {
    let mut loaded = Loaded { h: None, t: None, q: None };
    for (role, m) in matrices {
        let m = S::from_any(m.promote(field));
        match role {
            Role::H | Role::Graph => loaded.h = m,
            Role::T => loaded.t = m,
            Role::Q => loaded.q = m,
        }
    }
    loaded
}

fn dispatch(cmd: &Command, set: &Settings, field: FieldKind, matrices: Vec<(Role, AnyMatrix)>) -> Result<Outcome, Failure> {
    match field {
        FieldKind::Rational => commands::run::<Rational>(cmd, set, split(matrices, field)),
        FieldKind::Gaussian => commands::run::<Gaussian>(cmd, set, split(matrices, field)),
        FieldKind::Float => commands::run::<Complex64>(cmd, set, split(matrices, field)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let set = Settings {
        tol: cli.tol,
        k_max: cli.kmax,
        samples: cli.samples,
        seed: cli.seed,
    };
    let mut report = RunReport {
        command: cli.command.name().into(),
        arguments: std::env::args().skip(1).collect(),
        inputs: Vec::new(),
        mode: None,
        field: None,
        settings: json!({ "tol": cli.tol, "kmax": cli.kmax, "samples": cli.samples, "seed": cli.seed }),
        status: Status::Ok,
        results: serde_json::Value::Null,
        error: None,
        timings: Vec::new(),
    };
    let mut text = Vec::new();

    let result = load(&cli.command).and_then(|prep| {
        report.inputs = prep.inputs;
        report.timings.push(("load".into(), start.elapsed()));
        let field = resolve_field(cli.mode, &prep.matrices).map_err(|f| (Vec::new(), f))?;
        report.field = Some(field.to_string());
        report.mode = Some(if field.is_exact() { "exact" } else { "float" }.into());
        let t0 = Instant::now();
        let out = dispatch(&cli.command, &set, field, prep.matrices).map_err(|f| (Vec::new(), f));
        report.timings.push(("compute".into(), t0.elapsed()));
        out
    });
    match result {
        Ok(out) => {
            report.status = out.status;
            report.results = out.results;
            report.error = out.error;
            text = out.text;
        }
        Err((inputs, f)) => {
            if report.inputs.is_empty() {
                report.inputs = inputs;
            }
            report.status = f.status;
            report.error = Some(f);
        }
    }
    report.timings.push(("total".into(), start.elapsed()));

    match cli.output {
        Output::Structured => {
            println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
        }
        Output::Text => {
            for line in &text {
                println!("{line}");
            }
            if let Some(f) = &report.error {
                let label = paint(report.status.name(), report.status);
                eprintln!("{label}: {}", f.message);
            }
        }
    }
    ExitCode::from(report.status.code() as u8)
}
