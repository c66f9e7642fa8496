use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("invalid symbol {symbol:?} at line {line}")]
    InvalidSymbol { line: usize, symbol: String },

    #[error("index {index} out of range for {kind} of size {size}")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        size: usize,
    },

    #[error("invalid lattice input: {0}")]
    InvalidLattice(String),

    #[error("elements {0} and {1} are not in the required order")]
    NotComparable(usize, usize),

    #[error("order relation contains a cycle through `{0}` and `{1}`")]
    Cycle(String, String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("capacity exceeded: {what} (limit {limit}, reached {reached} before stopping)")]
    Capacity {
        what: &'static str,
        limit: usize,
        reached: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("method `{0}` needs the originating formal context")]
    MissingContext(&'static str),

    #[error("internal consistency failure: {0}")]
    CheckerDisagreement(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// Input problems (as opposed to resource limits or internal failures).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::DimensionMismatch(_)
                | Error::DuplicateName { .. }
                | Error::InvalidSymbol { .. }
                | Error::IndexOutOfRange { .. }
                | Error::Cycle(..)
                | Error::UnknownElement(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }

    pub fn is_resource_error(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
