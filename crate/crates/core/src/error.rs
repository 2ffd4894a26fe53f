use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate message `{0}`")]
    DuplicateMessage(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("network contains a cycle")]
    Cycle,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {q} is smaller than the alphabet size {alphabet}")]
    FieldTooSmall { q: u32, alphabet: u32 },
    #[error("ray direction must be nonzero and nonnegative")]
    BadDirection,
    #[error("weight vector is not solvable over GF({0})")]
    Unsolvable(u32),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("negative coordinate in down-closure input")]
    NegativeCoordinate,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("phase cap of {0} exceeded")]
    PhaseCap(usize),
    #[error("operation needs {needed} messages, network has {got}")]
    Unsupported { needed: usize, got: usize },
    #[error("LP is {0}")]
    LpStatus(&'static str),
    #[error("ray budget of {0} exhausted")]
    RayBudget(usize),
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("invalid number `{0}`")]
    Number(String),
}
