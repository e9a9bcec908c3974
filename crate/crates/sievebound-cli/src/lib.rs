//! Command-line surface: table reproduction, single evaluations,
//! optimization runs, verification suites, and DHL reporting.

pub mod commands;
pub mod config;
pub mod report;
pub mod targets;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Constraint(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<sievebound::error::FunctionalError> for CliError {
    fn from(e: sievebound::error::FunctionalError) -> Self {
        use sievebound::error::FunctionalError as F;
        match e {
            F::Constraint(_) | F::ExtendedNeedsK3(_) | F::ZeroDenominator => {
                CliError::Constraint(e.to_string())
            }
            F::Region(_) | F::Poly(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<sievebound::error::OptimizeError> for CliError {
    fn from(e: sievebound::error::OptimizeError) -> Self {
        use sievebound::error::OptimizeError as O;
        match e {
            O::Infeasible(_) | O::EmptyBasis => CliError::Constraint(e.to_string()),
            O::Functional(f) => f.into(),
            O::DependentBasis | O::ResidualTooLarge(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<sievebound::error::PolyError> for CliError {
    fn from(e: sievebound::error::PolyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<sievebound::error::ExactError> for CliError {
    fn from(e: sievebound::error::ExactError) -> Self {
        CliError::Usage(e.to_string())
    }
}
