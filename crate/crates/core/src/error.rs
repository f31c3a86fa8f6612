use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid pattern set: {0}")]
    InvalidSet(String),

    #[error("pattern longer than ambient word (pattern length {pattern}, word length {word})")]
    PatternTooLong { pattern: usize, word: usize },

    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index set must be strictly increasing with one index per pattern letter")]
    BadIndexSet,

    #[error("inverse undefined for word patterns")]
    InverseUndefined,

    #[error("restriction `{restriction}` not applicable: {reason}")]
    Restriction { restriction: String, reason: String },

    #[error("budget exceeded: search space has {space} states, budget is {budget}")]
    BudgetExceeded { budget: u128, space: u128 },

    #[error("outside theorem hypotheses: {0}")]
    Hypothesis(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("densities violate sandwich bounds: max({d1}, {d2}) <= {d12} <= {d1} + {d2} fails")]
    Sandwich { d1: f64, d2: f64, d12: f64 },

    #[error("mismatched patterns: {0}")]
    Mismatch(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
