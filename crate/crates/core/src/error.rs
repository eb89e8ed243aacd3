use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: usize },

    #[error("symbol set must be nonempty")]
    EmptySet,

    #[error("scaling a set by the zero element is not allowed")]
    ZeroScalar,

    #[error("extension degree s={s} exceeds the configured maximum {max}")]
    FieldTooLarge { s: u32, max: u32 },

    #[error("polynomial {poly:#b} is not primitive of degree {s}")]
    NotPrimitive { poly: u32, s: u32 },

    #[error("erasure type {j} out of range 0..={s}")]
    ErasureType { j: usize, s: u32 },

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("{divisor} does not divide {value}")]
    Divisibility { divisor: usize, value: usize },

    #[error("infeasible degree sequence: {0}")]
    InfeasibleDegrees(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
