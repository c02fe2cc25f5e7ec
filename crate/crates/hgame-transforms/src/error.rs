use hgame_core::CoreError;
use hgame_hierarchy::IncomparabilityWitness;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// β^i does not determine β^j: two histories with equal β^i and different β^j.
    #[error("player {} does not determine the observations of player {}", .i + 1, .j + 1)]
    NotFunctional { i: usize, j: usize, left: Vec<usize>, right: Vec<usize> },
    #[error("the game does not yield dynamic hierarchical information (round {})", .0.round())]
    NotDynamic(Box<IncomparabilityWitness>),
    #[error("strategy is not information-consistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, TransformError>;
