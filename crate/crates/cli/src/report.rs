//! Run reports and exit codes.

use std::time::Duration;

use isr_core::Error;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const FORMAT: &str = "isr-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The input was well formed but the claim did not hold.
    Rejected,
    InputError,
    /// The computation hit a numerically ill-posed point.
    NumericRegime,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Rejected => 1,
            Status::InputError => 2,
            Status::NumericRegime => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Rejected => "rejected",
            Status::InputError => "input-error",
            Status::NumericRegime => "numeric-regime",
        }
    }
}

pub fn error_status(e: &Error) -> Status {
    match e {
        Error::NotLatentSymmetry(_)
        | Error::NotNormal(_)
        | Error::SingularSymmetry(_)
        | Error::CrossGroupOverlap { .. }
        | Error::ResidualNotVanishing { .. }
        | Error::VerificationFailed { .. }
        | Error::NotEigenpair(_)
        | Error::NoExactEigenbasis(_) => Status::Rejected,
        Error::Parse { .. }
        | Error::DimensionMismatch(_)
        | Error::NotSquare(..)
        | Error::InvalidSubset(_)
        | Error::NotSelfAdjoint(_) => Status::InputError,
        Error::SingularShift { .. }
        | Error::SharedEigenvalue(_)
        | Error::PairingAmbiguous { .. }
        | Error::NoConvergence
        | Error::Singular => Status::NumericRegime,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch(_) => "dimension-mismatch",
        Error::NotSquare(..) => "not-square",
        Error::Singular => "singular",
        Error::NotSelfAdjoint(_) => "not-self-adjoint",
        Error::InvalidSubset(_) => "invalid-subset",
        Error::SingularShift { .. } => "singular-shift",
        Error::SharedEigenvalue(_) => "shared-eigenvalue",
        Error::NotEigenpair(_) => "not-eigenpair",
        Error::PairingAmbiguous { .. } => "pairing-ambiguous",
        Error::NotNormal(_) => "not-normal",
        Error::SingularSymmetry(_) => "singular-symmetry",
        Error::NotLatentSymmetry(_) => "not-latent-symmetry",
        Error::CrossGroupOverlap { .. } => "cross-group-overlap",
        Error::ResidualNotVanishing { .. } => "residual-not-vanishing",
        Error::VerificationFailed { .. } => "verification-failed",
        Error::NoExactEigenbasis(_) => "no-exact-eigenbasis",
        Error::NoConvergence => "no-convergence",
        Error::Parse { .. } => "parse",
    }
}

/// A failure with the status it maps to. Errors that do not come from the
/// core library (unreadable files, bad flags) are input errors.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Failure {
            status: Status::InputError,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn new(status: Status, kind: &str, message: impl Into<String>) -> Self {
        Failure {
            status,
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            status: error_status(&e),
            kind: error_kind(&e).into(),
            message: e.to_string(),
        }
    }
}

pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        Input {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

pub struct RunReport {
    pub command: String,
    pub arguments: Vec<String>,
    pub inputs: Vec<Input>,
    pub mode: Option<String>,
    pub field: Option<String>,
    pub settings: Value,
    pub status: Status,
    pub results: Value,
    pub error: Option<Failure>,
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    /// Key order is sorted, so two runs with the same inputs differ only in `timings`.
    pub fn to_json(&self) -> Value {
        let mut timings = Map::new();
        for (name, d) in &self.timings {
            timings.insert(format!("{name}_ms"), json!(d.as_secs_f64() * 1e3));
        }
        json!({
            "format": FORMAT,
            "command": self.command,
            "arguments": self.arguments,
            "inputs": self.inputs.iter().map(|i| json!({ "path": i.path, "sha256": i.sha256 })).collect::<Vec<_>>(),
            "mode": self.mode,
            "field": self.field,
            "settings": self.settings,
            "status": self.status.name(),
            "exit_code": self.status.code(),
            "results": self.results,
            "error": self.error.as_ref().map(|f| json!({ "kind": f.kind, "message": f.message })),
            "timings": timings,
        })
    }
}
