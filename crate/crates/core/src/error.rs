use thiserror::Error;

/// Errors surfaced by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("unknown variable `{0}`")]
    Variable(String),
    #[error("matrix is not a similitude: {0}")]
    NotSimilitude(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("unknown generator `{0}`")]
    Generator(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("coefficients are not the square of a Pfaffian characteristic polynomial (row {0})")]
    NotSymmetricSpectrum(usize),
    #[error("element is not symmetric under the involution")]
    Symmetry,
    #[error("entry at ({row}, {col}) lies outside the declared block span")]
    Membership { row: usize, col: usize },
    #[error("invalid GMA type: {0}")]
    Type(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("arity error: function needs {needed} arguments, got {got}")]
    Arity { needed: usize, got: usize },
    #[error("operation unsupported for kind {0}")]
    UnsupportedKind(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
