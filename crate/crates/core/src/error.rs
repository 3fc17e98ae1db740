use num_complex::Complex64 as c64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("left eigenvectors missing: {0}")]
    MissingLeftVectors(String),

    #[error("eigenvalue mu is not simple (|w^H B3 y| = {value:e} below {threshold:e})")]
    NonSimpleMu { value: f64, threshold: f64 },

    #[error(
        "eigenvalue lambda is not simple (|v^H M'(lambda) x| = {value:e} below {threshold:e})"
    )]
    NonSimpleLambda { value: f64, threshold: f64 },

    #[error("branch {branch} is ambiguous at lambda = {lambda}: candidates {first} and {second}")]
    AmbiguousBranch {
        branch: usize,
        lambda: c64,
        first: c64,
        second: c64,
    },

    #[error("branch {branch} does not exist ({available} finite branches)")]
    UnknownBranch { branch: usize, available: usize },

    #[error("no finite eigenvalue of the pencil at lambda = {lambda}")]
    NoFiniteBranch { lambda: c64 },

    #[error("singular Jacobian at lambda = {lambda}, mu = {mu} (sigma_min/||J|| = {ratio:e})")]
    SingularJacobian { lambda: c64, mu: c64, ratio: f64 },

    #[error("M(sigma) is numerically singular at sigma = {sigma} (growth {growth:e})")]
    ShiftIsEigenvalue { sigma: c64, growth: f64 },

    #[error("singular matrix in {context}")]
    SingularMatrix { context: String },

    #[error("degenerate scalar projection: |w^T A3 v| = {value:e} at iterate {iterate}")]
    DegenerateProjection { value: f64, iterate: usize },

    #[error("operator-determinant pencil is singular (Delta0 growth {growth:e})")]
    SingularProblem { growth: f64 },

    #[error("n*m = {size} exceeds the operator-determinant cap {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("{what} did not converge in {iterations} iterations")]
    NotConverged { what: String, iterations: usize },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. } => 2,
            Error::NonSimpleMu { .. }
            | Error::NonSimpleLambda { .. }
            | Error::AmbiguousBranch { .. }
            | Error::SingularJacobian { .. }
            | Error::ShiftIsEigenvalue { .. }
            | Error::SingularMatrix { .. }
            | Error::DegenerateProjection { .. }
            | Error::SingularProblem { .. }
            | Error::NoFiniteBranch { .. } => 3,
            Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 4,
            Error::TooLarge { .. } => 5,
            Error::DimensionMismatch(_)
            | Error::InvalidInput(_)
            | Error::MissingLeftVectors(_)
            | Error::UnknownBranch { .. }
            | Error::Eigen(_) => 1,
        }
    }
}
