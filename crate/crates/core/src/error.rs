use thiserror::Error;

use crate::words::StratumLabel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("logarithm undefined at -identity (branch point)")]
    LogBranch,

    #[error("empty matrix ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),

    #[error("genus {genus} not allowed for stratum {stratum}: {reason}")]
    Genus {
        genus: usize,
        stratum: StratumLabel,
        reason: &'static str,
    },

    #[error("solver did not converge after {steps} steps (residual {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },

    #[error("representation residual {residual:e} exceeds {limit:e}")]
    Residual { residual: f64, limit: f64 },

    #[error("vector is not a 1-cocycle (defect {defect:e})")]
    NotCocycle { defect: f64 },

    #[error("coboundaries not contained in cocycles (defect {defect:e})")]
    Inclusion { defect: f64 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("polynomials live on different variable sets")]
    VariableMismatch,

    #[error("matrix is not skew-hermitian")]
    NotSkewHermitian,

    #[error("bracket of generators {left} and {right} leaves their span")]
    NonClosure { left: String, right: String },

    #[error("point violates the model relations or inequalities (defect {defect:e})")]
    Infeasible { defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
