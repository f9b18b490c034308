use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("monomial arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("prime {p} is not weakly permissible (it divides a denominator)")]
    NotWeakPermissible { p: u64 },
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("too many variables for subset enumeration: {0} (limit 16)")]
    TooManyVariables(usize),
    #[error("variable set {0:?} is not independent modulo the ideal")]
    InvalidMis(Vec<String>),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("radical unavailable: {0}")]
    RadicalUnavailable(String),
    #[error("modular computation failed in stage {stage}: {reason}")]
    ModularFailure { stage: String, reason: String },
    #[error("ran out of primes: {0}")]
    PrimeExhaustion(String),
    #[error("deadline exceeded")]
    Timeout,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn modular(stage: &str, reason: impl Into<String>) -> Self {
        Error::ModularFailure {
            stage: stage.to_string(),
            reason: reason.into(),
        }
    }
}
