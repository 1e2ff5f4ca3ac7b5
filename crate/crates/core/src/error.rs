use thiserror::Error;

use crate::equilibrium::{BestResponseResult, NashVerdict};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix entries must number dim² = {expected}, got {found}")]
    Shape { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |m - m†| = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace:.12} (|tr - 1| = {residual:.3e})")]
    TraceNotOne { trace: f64, residual: f64 },

    #[error("Kraus completeness violated (max |Σ E†E - I| = {residual:.3e})")]
    CompletenessViolation { residual: f64 },

    #[error("chi trace-preservation condition violated at input block ({j}, {l}) (residual {residual:.3e})")]
    TraceConditionViolation { j: usize, l: usize, residual: f64 },

    #[error("chi minor condition violated at ({alpha}, {beta}) (deficit {deficit:.3e})")]
    MinorConditionViolation { alpha: usize, beta: usize, deficit: f64 },

    #[error("chi matrix is not in the strategy set: {0}")]
    NotInOmega(Box<Error>),

    #[error("payoff vector has {found} entries but the measurement has {expected} outcomes")]
    LengthMismatch { expected: usize, found: usize },

    #[error("payoff has imaginary part {imag:.3e}")]
    NonRealPayoff { imag: f64 },

    #[error("unsupported dimension {0} for this operation")]
    UnsupportedDimension(usize),

    #[error("measurement and payoffs do not reproduce the game's payoff operator for player {player} (residual {residual:.3e})")]
    InconsistentMeasurement { player: &'static str, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("best response did not converge (gap {:.3e} after {} iterations)", .0.gap, .0.iterations)]
    NoConvergence(Box<BestResponseResult>),

    #[error("Nash verification could not certify a best response (gaps {:.3e}, {:.3e})", .0.gap_i, .0.gap_ii)]
    NashNoConvergence(Box<NashVerdict>),

    #[error("projection onto the strategy set failed: {0}")]
    InfeasibleProjection(String),

    #[error("fixture is corrupt: {0}")]
    FixtureCorrupt(String),
}
