use thiserror::Error;

use crate::search::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("residue {value} out of range for modulus {p}")]
    ResidueOutOfRange { value: u64, p: u32 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{what} of size {size} exceeds the configured bound {bound}")]
    BoundExceeded { what: &'static str, size: u128, bound: u128 },

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u32, u32),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("not a coding clique: {0}")]
    NotCodingClique(Box<Violation>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search cancelled")]
    Cancelled,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn bound(what: &'static str, size: u128, bound: u128) -> Self {
        Error::BoundExceeded { what, size, bound }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
