use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode list must not be empty")]
    EmptyModes,

    #[error("bipartition parties overlap on mode {0}")]
    OverlappingBipartition(usize),

    #[error("bipartition does not cover all {n_modes} modes")]
    IncompleteBipartition { n_modes: usize },

    #[error("degenerate homodyne measurement: quadrature variance {variance:e}")]
    DegenerateMeasurement { variance: f64 },

    #[error("Bell-measurement matrix is singular (det = {det:e})")]
    SingularBellMatrix { det: f64 },

    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),

    #[error("state is not in standard form (largest defect {defect:e})")]
    NotStandardForm { defect: f64 },

    #[error("purity {0} outside (0, 1]")]
    InvalidPurity(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("drift matrix is unstable (spectral abscissa {abscissa:e})")]
    Unstable { abscissa: f64 },

    #[error("quadrature did not converge: error estimate {error:e} after {evaluations} evaluations")]
    NotConverged { error: f64, evaluations: usize },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
