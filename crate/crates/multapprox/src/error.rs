use thiserror::Error;

/// Failure modes of certified operations.
///
/// `UndecidablePredicate` is the honest outcome when two enclosures still
/// overlap at the precision cap: either the compared values are genuinely
/// equal (a boundary tie) or the budget was too small. Callers never get a
/// silent guess.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("predicate undecidable at {max_precision} bits ({context})")]
    UndecidablePredicate { max_precision: u32, context: String },

    #[error("nearest integer ambiguous for q={q}: the value ball straddles a half-integer")]
    AmbiguousNearestInteger { q: u64 },

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("horizon exceeded: Q={q} is beyond the profile horizon {horizon}")]
    HorizonExceeded { q: String, horizon: u64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn undecidable(max_precision: u32, context: impl Into<String>) -> Error {
        Error::UndecidablePredicate {
            max_precision,
            context: context.into(),
        }
    }
}
