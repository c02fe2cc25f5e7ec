use std::collections::HashMap;

use hgame_core::automaton::odd_cycle;
use hgame_core::{CoreError, GameGraph, StrategyProfile, WinningCondition};

use crate::error::{cap, Result};

/// An outcome of the profile violating the condition: `prefix` from v0 to the cycle entry x,
/// then `cycle` listing the positions after x back to x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LosingPlay {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// Reachable part of g × machines × condition, states `(position, machine states, q)`.
#[derive(Clone, Debug)]
pub struct OutcomeGraph {
    pub states: Vec<(usize, Vec<usize>, usize)>,
    /// Edges labelled by the position entered.
    pub edges: Vec<Vec<(usize, usize)>>,
}

pub fn outcome_graph(g: &GameGraph, s: &StrategyProfile, w: &WinningCondition, limit: usize) -> Result<OutcomeGraph> {
    s.check(g)?;
    let colors = w.over_game_colors(g)?;
    let n = g.players();
    let start = (g.initial(), s.machines.iter().map(|m| m.initial).collect::<Vec<_>>(), w.step(w.initial(), colors[g.color(g.initial())]));
    let mut index: HashMap<(usize, Vec<usize>, usize), usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut edges = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (v, ms, q) = states[k].clone();
        let profile: Vec<usize> = (0..n).map(|i| s.machines[i].out[ms[i]]).collect();
        let targets = g.post(v, g.encode_profile(&profile));
        if targets.is_empty() {
            return Err(CoreError::Malformed(format!("dead end at {}", g.position_name(v))).into());
        }
        let mut row = Vec::new();
        for &u in targets {
            let key = (
                u,
                (0..n).map(|i| s.machines[i].step(ms[i], g.obs(u, i))).collect(),
                w.step(q, colors[g.color(u)]),
            );
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if states.len() >= limit {
                        return Err(cap(format!("outcome states ({} explored)", states.len()), limit));
                    }
                    states.push(key.clone());
                    index.insert(key, states.len() - 1);
                    states.len() - 1
                }
            };
            row.push((u, id));
        }
        edges.push(row);
        k += 1;
    }
    Ok(OutcomeGraph { states, edges })
}

/// `None` iff every outcome of the profile satisfies the condition.
pub fn verify_strategy(g: &GameGraph, s: &StrategyProfile, w: &WinningCondition, limit: usize) -> Result<Option<LosingPlay>> {
    let og = outcome_graph(g, s, w, limit)?;
    let rank: Vec<u32> = og.states.iter().map(|st| w.priority(st.2)).collect();
    Ok(odd_cycle(og.states.len(), 0, &og.edges, &rank).map(|(pre, cyc)| {
        let mut prefix = vec![g.initial()];
        prefix.extend(pre.iter().map(|x| x.0));
        LosingPlay { prefix, cycle: cyc.iter().map(|x| x.0).collect() }
    }))
}
