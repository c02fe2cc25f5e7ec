use hgame_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArchError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("malformed process: {0}")]
    MalformedProcess(String),
    #[error("malformed monitor: {0}")]
    MalformedMonitor(String),
    #[error("not a pipeline: {0}")]
    NotPipeline(String),
    #[error("observations are not chain-factorable: player {later} is not determined by player {earlier} ({u} vs {v})")]
    NotFactorable { earlier: usize, later: usize, u: String, v: String },
    #[error("malformed routed action: {0}")]
    MalformedRoute(String),
    #[error("invalid aggregation table: {0}")]
    Aggregation(String),
    #[error(transparent)]
    Transform(#[from] hgame_transforms::TransformError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, ArchError>;

pub(crate) fn cap(what: impl Into<String>, limit: usize) -> ArchError {
    CoreError::Cap { what: what.into(), limit }.into()
}
