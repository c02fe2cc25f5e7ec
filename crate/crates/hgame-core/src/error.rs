use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("unknown symbol `{symbol}` in {context}")]
    UnknownSymbol { symbol: String, context: String },
    #[error("letter {letter} is outside the input alphabet of size {size}")]
    UnknownLetter { letter: usize, size: usize },
    #[error("malformed game: {0}")]
    Malformed(String),
    #[error("malformed machine: {0}")]
    MalformedMachine(String),
    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("resource cap exceeded: {what} (limit {limit})")]
    Cap { what: String, limit: usize },
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
