use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("alpha = {alpha} has no tabulated quantile constants (nearest supported: {below:?} / {above:?})")]
    UnsupportedAlpha { alpha: f64, below: Option<f64>, above: Option<f64> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range for dimension {dimension}")]
    OutOfBounds { index: u64, dimension: u64 },

    #[error("incompatible sketches: {0}")]
    Incompatible(String),

    #[error("degenerate sketch: sample {0} is zero")]
    DegenerateSketch(usize),

    #[error("sketch format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
