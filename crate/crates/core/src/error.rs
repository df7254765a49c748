use thiserror::Error;

/// Errors raised by the simulation and numerics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("path length must be at least 1")]
    EmptyPath,

    #[error("randomness tape covers {available} steps but {needed} were requested")]
    TapeTooShort { needed: usize, available: usize },

    #[error("length mismatch: {left} weights vs {right} steps")]
    LengthMismatch { left: usize, right: usize },

    #[error("drift coefficient (1-r)/(1-a) is undefined at a = 1")]
    UndefinedMean,

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("closed form unavailable: {0}")]
    ClosedFormUnavailable(String),

    #[error("rejection sampling exhausted after {attempts} attempts ({accepted} accepted)")]
    RejectionExhausted { attempts: u64, accepted: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("expected count {expected} in cell {cell} is below 5")]
    SparseCell { cell: usize, expected: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}

pub(crate) fn check_alpha(value: f64) -> Result<()> {
    if value > 0.0 && value <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value,
            reason: "must lie in (0, 2]",
        })
    }
}
