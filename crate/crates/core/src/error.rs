use thiserror::Error;

/// Every failure the engine can report. Domain errors map to exit code 1 in the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    NotAMultiple { from: u32, to: u32 },
    #[error("conductor {conductor} exceeds the configured cap {cap}")]
    ConductorCapExceeded { conductor: u64, cap: u32 },
    #[error("constant term is zero, series has no reciprocal")]
    NonUnitConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("linear coefficient is zero, series is not invertible")]
    NotInvertible,
    #[error("germ is not periodic with period {0} to this truncation")]
    NotPeriodic(u32),
    #[error("truncation {have} is too small, at least {needed} is required")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("germ equals the identity to its truncation")]
    IdentityToTruncation,
    #[error("operation requires multiplier 1")]
    WrongMultiplier,
    #[error("germ is not formally reversible")]
    NotReversible,
    #[error("no exact {degree}-th root of {value} in a cyclotomic field")]
    ScalarRootUnavailable { value: String, degree: u32 },
    #[error("no reverser of order {order}; realizable orders are {available:?}")]
    UnrealizableOrder { order: u32, available: Vec<u32> },
    #[error("second germ does not reverse the first")]
    NotAReverser,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("division by a series without a cancellable power of z")]
    NonUnitDivision,
    #[error("not a germ: {0}")]
    NotAGerm(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl GermError {
    /// Stable machine-readable name used in JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            GermError::DivisionByZero => "DivisionByZero",
            GermError::NotAMultiple { .. } => "NotAMultiple",
            GermError::ConductorCapExceeded { .. } => "ConductorCapExceeded",
            GermError::NonUnitConstantTerm => "NonUnitConstantTerm",
            GermError::NonzeroConstantTerm => "NonzeroConstantTerm",
            GermError::NotInvertible => "NotInvertible",
            GermError::NotPeriodic(_) => "NotPeriodic",
            GermError::InsufficientPrecision { .. } => "InsufficientPrecision",
            GermError::IdentityToTruncation => "IdentityToTruncation",
            GermError::WrongMultiplier => "WrongMultiplier",
            GermError::NotReversible => "NotReversible",
            GermError::ScalarRootUnavailable { .. } => "ScalarRootUnavailable",
            GermError::UnrealizableOrder { .. } => "UnrealizableOrder",
            GermError::NotAReverser => "NotAReverser",
            GermError::BadParameters(_) => "BadParameters",
            GermError::Syntax { .. } => "SyntaxError",
            GermError::NonUnitDivision => "NonUnitDivision",
            GermError::NotAGerm(_) => "NotAGerm",
            GermError::Inconsistent(_) => "Inconsistent",
        }
    }
}

pub type Result<T> = std::result::Result<T, GermError>;
