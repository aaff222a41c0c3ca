use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("invalid graph of groups: {0}")]
    InvalidSpec(String),

    #[error("{0} has no axis: the element is trivial")]
    TrivialElement(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("escalation exhausted after {steps} steps: {what}")]
    EscalationExhausted { steps: u32, what: String },

    #[error("metric is not a tree metric: {0}")]
    NotTreeMetric(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
