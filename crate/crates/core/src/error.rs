use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("line search underflow: step fell below {min_step:e} without sufficient decrease")]
    StepUnderflow { min_step: f64 },

    #[error("numeric verdict {numeric} disagrees with exact oracle verdict {oracle}")]
    OracleMismatch { numeric: String, oracle: String },

    #[error("commutator leaves the span of the compact generators (residual {residual:e})")]
    BracketEscapesAlgebra { residual: f64 },

    #[error("destabilizing cocharacter search exceeded bound 2^20")]
    SearchBudgetExceeded,

    #[error("real stabilizer kernel has odd dimension {0}")]
    OddKernelDimension(usize),

    #[error("vector is not fixed by the subgroup (relative residual {residual:e})")]
    NotFixed { residual: f64 },

    #[error("base point is not a moment-map zero (|mu| = {mu_norm:e})")]
    BasePointNotCritical { mu_norm: f64 },

    #[error("representation check failed: {0}")]
    InvalidRepresentation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
