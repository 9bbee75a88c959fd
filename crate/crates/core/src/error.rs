use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("mesh file line {line}: {msg}")]
    MeshParse { line: usize, msg: String },

    #[error("disconnected input mesh: component of {size} element(s) containing element {element} is not reachable from element 0")]
    Disconnected { element: usize, size: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate: zero healthy-protein drop (p_delta = {0})")]
    DegenerateDrop(f64),

    #[error("invalid tableau: {0}")]
    Tableau(String),

    #[error("non-finite state at t = {time} year")]
    NumericalAbort { time: f64 },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 3 for numerical failures, 2 for everything a
    /// user can fix in the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalAbort { .. } | Error::NotPositiveDefinite { .. } | Error::NoConvergence { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
