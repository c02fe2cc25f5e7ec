//! Game graphs with imperfect information, finite-state transducers and word automata.

pub mod automaton;
pub mod condition;
pub mod doc;
pub mod error;
pub mod game;
pub mod machine;
pub mod product;
pub mod symbols;

pub use automaton::{Mode, WordAutomaton};
pub use condition::{StrategyProfile, WinningCondition};
pub use error::{CoreError, Result};
pub use game::{enumerate_histories, validate_game, Diagnostic, GameBuilder, GameGraph, History, Move};
pub use machine::{MealyMachine, MooreMachine};
pub use product::{product_with_moore, product_with_signals, Signal, SignalProduct};
pub use symbols::Alphabet;
