use hgame_core::CoreError;
use hgame_hierarchy::LassoWitness;
use hgame_transforms::TransformError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("condition not observable: player {} sees {} and {} alike but their colours differ", .player + 1, .u, .v)]
    NotObservable { player: usize, u: String, v: String },
    #[error("the game does not yield recurring hierarchical information")]
    NotRecurring(Box<LassoWitness>),
    #[error("dead end at {position}")]
    DeadEnd { position: String },
    #[error("condition has {found} priorities, at most {limit} are supported")]
    TooManyPriorities { found: usize, limit: usize },
    /// Internal check failed: a returned profile did not verify.
    #[error("synthesized profile does not verify: {0}")]
    Unsound(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, SynthesisError>;

pub(crate) fn cap(what: impl Into<String>, limit: usize) -> SynthesisError {
    SynthesisError::Core(CoreError::Cap { what: what.into(), limit })
}
