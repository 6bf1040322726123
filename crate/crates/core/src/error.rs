use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("cannot satisfy generator constraints: {0}")]
    Unsatisfiable(String),

    #[error("retry budget exhausted after {0} attempts")]
    RetryBudget(usize),

    #[error("vertex {dst} is unreachable from {src}")]
    Unreachable { src: usize, dst: usize },

    #[error("too many geodesics (more than {0})")]
    GeodesicCap(usize),

    #[error("derivative is singular at t = 0 for alpha < 1")]
    SingularDerivative,

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("io error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

/// Validates a fractional order in (0, 1], or (0, 1) when `allow_one` is false.
pub(crate) fn check_alpha(alpha: f64, allow_one: bool) -> Result<()> {
    let ok = if allow_one {
        alpha > 0.0 && alpha <= 1.0
    } else {
        alpha > 0.0 && alpha < 1.0
    };
    if ok {
        Ok(())
    } else if allow_one {
        Err(Error::param(format!("alpha = {alpha} must lie in (0, 1]")))
    } else {
        Err(Error::param(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}
