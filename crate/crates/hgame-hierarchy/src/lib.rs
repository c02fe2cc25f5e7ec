//! Deciders for static, dynamic and recurring hierarchical information, with witnesses,
//! gap sizes and generators of test games.

pub mod config;
pub mod dynamic;
pub mod generators;
pub mod recurring;
pub mod statics;
pub mod transducer;

pub use config::{configuration_of, player_pairs, update_configuration, Cell, Configuration};
pub use dynamic::{check_dynamic, non_hierarchy_nfa, non_hierarchy_product, IncomparabilityWitness};
pub use generators::{gen_from_nfa_emptiness, gen_from_nfa_universality, gen_prime_family};
pub use recurring::{
    check_recurring, explore, gap_size, recurring_buchi, Gap, LassoWitness, DEFAULT_MAX_CONFIGURATIONS,
};
pub use statics::{check_static, information_preorder, PairRefutation, StaticResult};
pub use transducer::{is_functional, observation_transducer, NonFunctional};
