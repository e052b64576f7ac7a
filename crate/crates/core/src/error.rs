use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A quantity that must hold by construction was violated beyond rounding.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// No enumerated candidate reached the south pole.
    #[error("synthesis failure: {0}")]
    SynthesisFailure(String),

    /// A brute-force search found no admissible law.
    #[error("search failure: {0}")]
    SearchFailure(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
