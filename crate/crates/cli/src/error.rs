use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VALIDATION: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const CROSS_CHECK: u8 = 3;
    pub const NO_CONVERGENCE: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("{0}")]
    NoConvergence(String),
}

impl CliError {
    pub fn parse(origin: &str, e: &serde_json::Error) -> Self {
        CliError::Parse(format!("{origin}: line {} column {}: {e}", e.line(), e.column()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::CrossCheck(_) => exit::CROSS_CHECK,
            CliError::NoConvergence(_) => exit::NO_CONVERGENCE,
        }
    }
}

impl From<qgame_core::Error> for CliError {
    fn from(e: qgame_core::Error) -> Self {
        use qgame_core::Error as E;
        let msg = e.to_string();
        match e {
            E::NonRealPayoff { .. } | E::InfeasibleProjection(_) | E::FixtureCorrupt(_) => CliError::CrossCheck(msg),
            E::EigenNoConvergence { .. } | E::NoConvergence(_) | E::NashNoConvergence(_) => CliError::NoConvergence(msg),
            _ => CliError::Validation(msg),
        }
    }
}
