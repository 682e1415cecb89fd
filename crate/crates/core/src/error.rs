use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on node `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("tuple has {got} nodes but the motif has arity {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("directedness mismatch: {left} is {}, {right} is {}", dir(*.left_directed), dir(*.right_directed))]
    DirectednessMismatch {
        left: &'static str,
        left_directed: bool,
        right: &'static str,
        right_directed: bool,
    },

    #[error("tuple uses node {0} more than once")]
    NonInjective(usize),

    #[error("graph has {n} nodes, fewer than the motif arity {k}")]
    GraphTooSmall { n: usize, k: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "exhaustive enumeration needs 2^{links} graphs, above the limit of 2^{limit} (n = {n})"
    )]
    SizeLimit {
        n: usize,
        links: usize,
        limit: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn dir(directed: bool) -> &'static str {
    if directed {
        "directed"
    } else {
        "undirected"
    }
}

/// Coarse error classes, used by the command line front end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Parse,
    Validation,
    SizeLimit,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) => ErrorClass::Io,
            Error::Parse { .. } | Error::SelfLoop { .. } | Error::Json(_) => ErrorClass::Parse,
            Error::SizeLimit { .. } => ErrorClass::SizeLimit,
            _ => ErrorClass::Validation,
        }
    }

    pub(crate) fn directedness(
        left: &'static str,
        left_directed: bool,
        right: &'static str,
        right_directed: bool,
    ) -> Self {
        Error::DirectednessMismatch {
            left,
            left_directed,
            right,
            right_directed,
        }
    }
}
