use thiserror::Error;

/// Errors raised by the algebra, combinatorics and formula layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial division is not exact: remainder {remainder}")]
    InexactDivision { remainder: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("symbol alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no image given for generator P_{}", 2 * .0)]
    MissingImage(usize),
    #[error("series must start with constant term 1, got {0}")]
    BadLeadingCoefficient(String),
    #[error("empty composition")]
    EmptyComposition,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
