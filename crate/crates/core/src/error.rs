use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One violated premise found while validating a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted config key, e.g. `ring.radius_m`.
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Broad failure category, used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
    Config,
    Convergence,
    PhysicalValidity,
    Numerical,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("scenario failed validation:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("{what} did not converge: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Convergence {
        what: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("physical validity violated: {0}")]
    PhysicalValidity(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("scenario `{id}`: {source}")]
    Scenario {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) => ErrorKind::Config,
            Error::Parse(_) => ErrorKind::Parse,
            Error::Validation(_) => ErrorKind::Validation,
            Error::Convergence { .. } => ErrorKind::Convergence,
            Error::PhysicalValidity(_) => ErrorKind::PhysicalValidity,
            Error::Numerical(_) => ErrorKind::Numerical,
            Error::Scenario { source, .. } => source.kind(),
            Error::Io(_) | Error::Csv(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn in_scenario(self, id: &str) -> Error {
        match self {
            e @ Error::Scenario { .. } => e,
            e => Error::Scenario {
                id: id.to_string(),
                source: Box::new(e),
            },
        }
    }
}
