//! Synthesis of finite-state distributed strategies by epistemic unfolding, and strategy
//! verification by model checking.

pub mod arena;
pub mod error;
pub mod extract;
pub mod model;
pub mod solve;
pub mod verify;

use std::collections::{HashMap, VecDeque};

use hgame_core::condition::observability_violation;
use hgame_core::{validate_game, GameGraph, StrategyProfile, WinningCondition};
use hgame_hierarchy::non_hierarchy_product;
use hgame_transforms::restrict_to_hierarchical;

pub use arena::{check_preconditions, unfold_quotient, Config, KnowledgeArena, Step};
pub use error::{Result, SynthesisError};
pub use extract::extract_distributed_strategy;
pub use model::{
    assignments, core, epistemic_update, homomorphic_equiv, homomorphism, update_components, ActionAssignment,
    Component, EpistemicModel,
};
pub use solve::{arena_product, solve_perfect_info, ArenaProduct, ArenaSolution, Owner, ParityGame, Solution};
pub use verify::{outcome_graph, verify_strategy, LosingPlay, OutcomeGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Realizable(StrategyProfile),
    Unrealizable,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Homomorphism classes of epistemic models.
    pub classes: usize,
    pub arena_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Synthesis {
    pub fn profile(&self) -> Option<&StrategyProfile> {
        match &self.outcome {
            Outcome::Realizable(s) => Some(s),
            Outcome::Unrealizable => None,
        }
    }
}

/// Unfold, solve, extract; the profile is verified before it is returned.
pub fn synthesize(g: &GameGraph, w: &WinningCondition, cfg: &Config) -> Result<Synthesis> {
    let a = unfold_quotient(g, w, cfg)?;
    let sol = solve_perfect_info(&a, w, cfg)?;
    let stats = Stats { classes: a.num_classes(), arena_vertices: sol.product.game.len() };
    if !sol.synthesizer_wins {
        return Ok(Synthesis { outcome: Outcome::Unrealizable, stats });
    }
    let s = extract_distributed_strategy(&a, &sol, g, w)?;
    if let Some(l) = verify_strategy(g, &s, w, cfg.max_states)? {
        return Err(SynthesisError::Unsound(format!("losing play of length {}", l.prefix.len() + l.cycle.len())));
    }
    Ok(Synthesis { outcome: Outcome::Realizable(s), stats })
}

/// Synthesis over the restriction to hierarchical histories. A returned profile, read over
/// the original observations, wins and never produces a non-hierarchical history.
pub fn synthesize_hierarchical(g: &GameGraph, w: &WinningCondition, cfg: &Config) -> Result<Synthesis> {
    if let Some(d) = validate_game(g).into_iter().next() {
        return Err(SynthesisError::DeadEnd { position: d.message });
    }
    w.over_game_colors(g)?;
    if let Some((player, u, v)) = observability_violation(g) {
        return Err(SynthesisError::NotObservable {
            player,
            u: g.position_name(u).to_string(),
            v: g.position_name(v).to_string(),
        });
    }
    let r = restrict_to_hierarchical(g, w, cfg.max_states)?;
    let res = synthesize(&r.game, &r.condition, cfg)?;
    let Outcome::Realizable(s) = res.outcome else {
        return Ok(res);
    };
    let machines = s
        .machines
        .iter()
        .enumerate()
        .map(|(i, m)| {
            // observations of g that never occur on hierarchical histories are never read
            let f: Vec<usize> = g
                .observations(i)
                .names()
                .iter()
                .map(|b| r.game.observations(i).get(b).unwrap_or(0))
                .collect();
            m.precompose(g.observations(i).names().to_vec(), &f).minimize()
        })
        .collect();
    let s = StrategyProfile { machines };
    if let Some(l) = verify_strategy(g, &s, w, cfg.max_states)? {
        return Err(SynthesisError::Unsound(format!("losing play of length {}", l.prefix.len() + l.cycle.len())));
    }
    if let Some(h) = non_hierarchical_outcome(g, &s, cfg.max_states)? {
        return Err(SynthesisError::Unsound(format!("outcome {} is not hierarchical", h.len())));
    }
    Ok(Synthesis { outcome: Outcome::Realizable(s), stats: res.stats })
}

/// A shortest outcome of the profile whose information sets are not totally ordered.
pub fn non_hierarchical_outcome(g: &GameGraph, s: &StrategyProfile, limit: usize) -> Result<Option<Vec<usize>>> {
    s.check(g)?;
    let d = non_hierarchy_product(g).determinize_capped(limit)?;
    let n = g.players();
    let q0 = d.next(d.initial.expect("initial"), g.initial());
    let start = (g.initial(), s.machines.iter().map(|m| m.initial).collect::<Vec<_>>(), q0);
    let mut parent: HashMap<(usize, Vec<usize>, usize), Option<(usize, Vec<usize>, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(st) = queue.pop_front() {
        if d.accepting[st.2] {
            let mut path = vec![st.0];
            let mut cur = st;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(p.0);
                cur = p.clone();
            }
            path.reverse();
            return Ok(Some(path));
        }
        let (v, ms, q) = &st;
        let profile: Vec<usize> = (0..n).map(|i| s.machines[i].out[ms[i]]).collect();
        for &u in g.post(*v, g.encode_profile(&profile)) {
            let key = (u, (0..n).map(|i| s.machines[i].step(ms[i], g.obs(u, i))).collect(), d.next(*q, u));
            if !parent.contains_key(&key) {
                if parent.len() >= limit {
                    return Err(error::cap(format!("outcome states ({} explored)", parent.len()), limit));
                }
                parent.insert(key.clone(), Some(st.clone()));
                queue.push_back(key);
            }
        }
    }
    Ok(None)
}
