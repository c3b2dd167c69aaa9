use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("need at least {needed} elements, got {got}")]
    TooFewElements { needed: usize, got: usize },

    #[error("elements must be strictly ascending: {0}")]
    NotAscending(String),

    #[error("element {value} exceeds the supported maximum {limit}")]
    ElementTooLarge { value: u64, limit: u32 },

    #[error("invalid set literal `{0}`")]
    Parse(String),

    #[error("set is not normalized: {0}")]
    NotNormalized(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("hypotheses not met: {0}")]
    Hypothesis(String),

    #[error("{0}")]
    Inapplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
