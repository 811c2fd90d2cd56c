use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vertex index {0} out of range (n = {1})")]
    IndexOutOfRange(usize, usize),

    #[error("mutation at frozen vertex {0}")]
    FrozenMutation(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("configuration mismatch: {0}")]
    Config(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("vector not in the positive cone: {0}")]
    Cone(String),

    #[error("non-Laurent result: {0}")]
    NonLaurent(String),

    #[error("braid check unsupported: |pairing| = {0} >= 2")]
    BraidUnsupported(i64),

    #[error("internal consistency fault: {0}")]
    InternalFault(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported triangulation: {0}")]
    UnsupportedTriangulation(String),

    #[error("edge not flippable: {0}")]
    Flip(String),

    #[error("surface not admissible: {0}")]
    NotAdmissible(String),

    #[error("flip-path search exceeded node budget of {0}")]
    SearchBudget(usize),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
