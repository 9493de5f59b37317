use thiserror::Error;

use crate::algebra::Place;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("mixed field backends: {0} and {1}")]
    FieldMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("entry {0} is not a Laurent polynomial")]
    NotLaurent(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("determinant is {0}, expected 1")]
    DeterminantNotOne(String),

    #[error("vertices live in different trees ({0:?} and {1:?})")]
    MixedPlaces(Place, Place),

    #[error("enumeration requires a finite field")]
    InfiniteField,

    #[error("word radius {radius} exceeds the cap {cap}")]
    RadiusOverCap { radius: usize, cap: usize },

    #[error("boundary of a 0-chain is undefined")]
    BoundaryOfVertices,

    #[error("chain mixes cells of dimension {0} and {1}")]
    MixedDimensions(usize, usize),

    #[error("cell is not a 2-cell of the lower star at index {0}")]
    NotInStarDown(i64),

    #[error("chain is not a relative cycle: {0} has boundary coefficient {1}")]
    NotACycle(String, String),

    #[error("vertices of one cell demand different reducers")]
    IncompatibleReducers,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
