use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("sample interval mismatch: {0} s vs {1} s")]
    DtMismatch(f64, f64),

    #[error("signal has zero energy")]
    ZeroSignal,

    #[error("only {found} trusted bins in fit band, need at least {needed}")]
    InsufficientBins { found: usize, needed: usize },

    #[error("spectral zero on unit circle: root {index} at ({re}, {im}) is within {delta} of |u| = 1")]
    RootOnUnitCircle {
        index: usize,
        re: f64,
        im: f64,
        delta: f64,
    },

    #[error("polynomial of degree 0 has no roots")]
    DegreeZero,

    #[error("root finder did not converge after {iterations} iterations (best scaled residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("every trace in the gather failed: {0}")]
    AllTracesFailed(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
