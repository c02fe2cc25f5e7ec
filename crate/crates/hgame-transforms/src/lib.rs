//! Transformations that preserve the information structure of a game: observation
//! translators, rank and relative-order signals, cross-free lookahead, the shadow game, and
//! the restriction to hierarchical histories.

pub mod crossfree;
pub mod error;
pub mod restrict;
pub mod shadow;
pub mod signals;
pub mod translate;

pub use crossfree::{find_crossing, make_cross_free, CrossFreeGame, SKIP};
pub use error::{Result, TransformError};
pub use restrict::{lift_condition, restrict_to_hierarchical, Restricted};
pub use shadow::{redistribute_strategy, shadow_game, ShadowGame, LOSE, SINK};
pub use signals::{annotate_ranks, rank_signal, relative_order_signal, Knowledge, KnowledgeTracker, RankAnnotatedGame};
pub use translate::{
    hierarchical_observation_product, positional_violation, to_hierarchical_observation, translator_moore,
};
