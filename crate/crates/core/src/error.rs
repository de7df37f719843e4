use thiserror::Error;

/// Errors produced by the surface computations.
///
/// Every variant maps onto a domain failure; the CLI reports these with
/// exit code 1 and a machine-readable `kind` string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("wrong number of factors: expected {expected}, got {got}")]
    ArityError { expected: usize, got: usize },
    #[error("invalid subscroll: {0}")]
    InvalidSubscroll(String),
    #[error("invalid curve configuration: {0}")]
    InvalidConfig(String),
    #[error("configuration is not negative definite")]
    NotNegDef,
    #[error("configuration is not contractible: {0}")]
    NotContractible(String),
    #[error("configuration is not minimal: curve {0} is a (-1)-curve")]
    NotMinimal(String),
    #[error("support of the negative part is not negative definite")]
    NotNegDefSupport,
    #[error("invalid fiber: {0}")]
    InvalidFiber(String),
    #[error("invalid invariants: {0}")]
    InvalidInvariants(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("not ample: {0}")]
    NotAmple(String),
    #[error("not in scope: {0}")]
    NotInScope(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("search budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LatticeMismatch(_) => "LatticeMismatch",
            Error::InvalidLattice(_) => "InvalidLattice",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ArityError { .. } => "ArityError",
            Error::InvalidSubscroll(_) => "InvalidSubscroll",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::NotNegDef => "NotNegDef",
            Error::NotContractible(_) => "NotContractible",
            Error::NotMinimal(_) => "NotMinimal",
            Error::NotNegDefSupport => "NotNegDefSupport",
            Error::InvalidFiber(_) => "InvalidFiber",
            Error::InvalidInvariants(_) => "InvalidInvariants",
            Error::NotApplicable(_) => "NotApplicable",
            Error::NotAmple(_) => "NotAmple",
            Error::NotInScope(_) => "NotInScope",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
