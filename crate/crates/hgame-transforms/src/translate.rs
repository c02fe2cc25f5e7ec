use hgame_core::{GameGraph, Mode, MooreMachine, Signal, SignalProduct, WordAutomaton};
use hgame_core::product::product_with_signals;
use hgame_hierarchy::transducer::functional_in_game;

use crate::error::{Result, TransformError};

/// Moore machine over B^i emitting β^j of the current position, defined when β^i determines
/// β^j on histories. It is the subset construction on the B^i-projection of the game; every
/// subset reached carries a single β^j value, and the empty subset (impossible words) emits
/// the first letter.
pub fn translator_moore(g: &GameGraph, i: usize, j: usize) -> Result<MooreMachine> {
    if let Err((left, right)) = functional_in_game(g, i, j) {
        return Err(TransformError::NotFunctional { i, j, left, right });
    }
    let bi = g.observations(i);
    let mut a = WordAutomaton::new(Mode::NfaFinite, bi.names().to_vec(), g.num_positions());
    a.state_names = g.positions().names().to_vec();
    a.initial = Some(g.initial());
    for v in 0..g.num_positions() {
        a.accepting[v] = true;
        for &w in g.successors(v) {
            a.add_transition(v, g.obs(w, i), w);
        }
    }
    let d = a.determinize();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); d.num_states()];
    // reconstruct each subset by replaying the BFS that produced it
    members[d.initial.expect("initial")] = vec![g.initial()];
    let mut queue = std::collections::VecDeque::from([d.initial.unwrap()]);
    let mut seen = vec![false; d.num_states()];
    seen[d.initial.unwrap()] = true;
    while let Some(s) = queue.pop_front() {
        for b in 0..bi.len() {
            let t = d.next(s, b);
            if !seen[t] {
                seen[t] = true;
                let mut m: Vec<usize> = members[s].iter().flat_map(|&q| a.successors(q, b).iter().copied()).collect();
                m.sort_unstable();
                m.dedup();
                members[t] = m;
                queue.push_back(t);
            }
        }
    }
    let out = members.iter().map(|m| m.first().map_or(0, |&v| g.obs(v, j))).collect();
    let delta = (0..d.num_states()).map(|s| (0..bi.len()).map(|b| d.next(s, b)).collect()).collect();
    Ok(MooreMachine::new(bi.names().to_vec(), g.observations(j).names().to_vec(), d.initial.unwrap(), delta, out)?)
}

/// Reads positions: feeds β^i of each entered position to the translator.
fn over_positions(g: &GameGraph, i: usize, m: &MooreMachine) -> MooreMachine {
    let f: Vec<usize> = (0..g.num_positions()).map(|v| g.obs(v, i)).collect();
    m.precompose(g.positions().names().to_vec(), &f)
}

/// Expands the observations of each player with the translated observations of every player
/// after it in `order` (most-informed first). The result is positionally hierarchical in
/// that order and its histories are in bijection with those of `g`.
pub fn to_hierarchical_observation(g: &GameGraph, order: &[usize]) -> Result<GameGraph> {
    Ok(hierarchical_observation_product(g, order)?.game)
}

/// [`to_hierarchical_observation`] with the origin of every product position.
pub fn hierarchical_observation_product(g: &GameGraph, order: &[usize]) -> Result<SignalProduct> {
    let mut signals = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            let m = translator_moore(g, i, j)?;
            signals.push(Signal { machine: over_positions(g, i, &m), expose: Some(i) });
        }
    }
    Ok(product_with_signals(g, &signals)?)
}

/// Positional hierarchy in the given order: on reachable positions the observation of each
/// player determines those of every later player. Returns an offending (i, j, u, v).
pub fn positional_violation(g: &GameGraph, order: &[usize]) -> Option<(usize, usize, usize, usize)> {
    let reach = hgame_core::game::reachable_positions(g);
    let vs: Vec<usize> = (0..g.num_positions()).filter(|&v| reach[v]).collect();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            for &u in &vs {
                for &v in &vs {
                    if g.obs(u, i) == g.obs(v, i) && g.obs(u, j) != g.obs(v, j) {
                        return Some((i, j, u, v));
                    }
                }
            }
        }
    }
    None
}
