use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("eigensolver did not converge within {iterations} iterations")]
    EigenNoConvergence { iterations: usize },
    #[error("snapshot block is numerically rank deficient: sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e}")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    #[error("nodes {i} and {j} coincide")]
    CoincidentNodes { i: usize, j: usize },
    #[error("matrix is singular (zero pivot at step {step})")]
    Singular { step: usize },
    #[error("QR compression needs n >= m+1 rows, got n = {n} for m+1 = {cols}; use the uncompressed path")]
    CompressionUnavailable { n: usize, cols: usize },
    #[error("all singular values are below the rank tolerance")]
    ZeroRank,
    #[error("eigenvalue {index} is zero")]
    ZeroEigenvalue { index: usize },
    #[error("inverse powers of eigenvalue {index} overflow (|lambda|^-(m-1) > 1e300)")]
    InversePowerOverflow { index: usize },
    #[error("eigenvalue {index} coincides with the root of unity at frequency {freq}; use the case-2 structure")]
    RootOfUnity { index: usize, freq: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
