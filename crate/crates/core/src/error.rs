use thiserror::Error;

/// Errors raised by the algebra, integration and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("zero denominator parameter at term {term}")]
    ParameterPole { term: usize },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    Overflow { degree: usize, cap: usize },

    #[error("angular index {mode} exceeds the cutoff {cutoff}")]
    AngularOverflow { mode: i64, cutoff: usize },

    #[error("mode {mode} has no closed polynomial form")]
    NotPolynomial { mode: i64 },

    #[error("kernel index ({i}, {j}) exceeds the degree cap {cap}")]
    DegreeCapExceeded { i: usize, j: usize, cap: usize },

    #[error("not summable within the truncation: {0}")]
    NotSummable(String),

    #[error("incompatible operands: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
