use thiserror::Error;

use crate::scalar::ParseScalarError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-numeric value at {path}: {source}")]
    NonNumeric {
        path: String,
        #[source]
        source: ParseScalarError,
    },
    #[error("invalid decoding order: {0}")]
    InvalidOrder(String),
    #[error("invalid power exponent for {user}: {reason}")]
    InvalidPower { user: String, reason: String },
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("region is empty: constraint over {users} has negative bound {bound}")]
    EmptyRegion { users: String, bound: String },
    #[error("enumeration needs {required} strategy evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

impl Error {
    /// Short stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed",
            Error::Dimension(_) => "dimension_mismatch",
            Error::NonNumeric { .. } => "non_numeric",
            Error::InvalidOrder(_) => "invalid_order",
            Error::InvalidPower { .. } => "invalid_power",
            Error::Precondition(_) => "precondition",
            Error::EmptyRegion { .. } => "empty_region",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Parameter(_) => "parameter",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
