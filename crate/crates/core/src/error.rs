use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a sum of two squares")]
    NotRepresentable(u64),
    #[error("tuple length {0} is odd; correlation counts require an even length")]
    OddLength(usize),
    #[error("tuple length {len} exceeds the supported maximum {max}")]
    LengthTooLarge { len: usize, max: usize },
    #[error("projected work {projected:.3e} exceeds the budget {budget:.3e}")]
    BudgetExceeded { projected: f64, budget: f64 },
    #[error("n = {0} has no lattice point with both coordinates nonzero; the field vanishes identically")]
    EmptySpectrum(u64),
    #[error("variance {variance:e} at ({x1}, {x2}) is below the degeneracy floor")]
    DegeneratePoint { x1: f64, x2: f64, variance: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("grid of size {0} is too small; at least 3x3 is required")]
    GridTooSmall(usize),
    #[error("quadrature did not converge: relative change {rel_change:e} exceeds tolerance {tolerance:e}")]
    NonConvergent { rel_change: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::OddLength(_) => "OddLength",
            Error::LengthTooLarge { .. } => "LengthTooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::EmptySpectrum(_) => "EmptySpectrum",
            Error::DegeneratePoint { .. } => "DegeneratePoint",
            Error::NotPsd { .. } => "NotPSD",
            Error::GridTooSmall(_) => "GridTooSmall",
            Error::NonConvergent { .. } => "NonConvergent",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "Io",
        }
    }

    /// One-line JSON form used by the command-line front end.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
        })
        .unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.kind()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
