use std::collections::{HashMap, VecDeque};

use hgame_core::{GameGraph, MooreMachine, StrategyProfile, WinningCondition};

use crate::arena::KnowledgeArena;
use crate::error::Result;
use crate::solve::ArenaSolution;

/// Machine state of a player: its Synthesizer vertex and its class in that model, or the
/// sink reached on observations the profile rules out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Track {
    At { model: usize, q: usize, class: usize },
    Sink,
}

/// Each player follows the arena vertex and its own class in the representative model. On
/// an observation, the successors of its class with that observation lie in one ∼^i class
/// of one component; the component's homomorphism gives the next class.
pub fn extract_distributed_strategy(
    a: &KnowledgeArena,
    sol: &ArenaSolution,
    g: &GameGraph,
    w: &WinningCondition,
) -> Result<StrategyProfile> {
    let mut machines = Vec::new();
    for i in 0..g.players() {
        let nb = g.observations(i).len();
        let start = Track::At { model: a.initial, q: sol.product.vertex[sol.product.initial].expect("synthesizer").1, class: 0 };
        let mut index: HashMap<Track, usize> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let (row, act) = match states[s] {
                Track::Sink => (vec![Track::Sink; nb], 0),
                Track::At { model, q, class } => {
                    let m = &a.models[model];
                    let choice = sol.choice[&(model, q)];
                    let asg = &a.assignments[model][choice];
                    let mut row = vec![Track::Sink; nb];
                    for step in &a.steps[model][choice] {
                        let nm = &a.models[step.target];
                        let nq = w.step(q, a.color[step.target]);
                        for (n, &(k, u)) in step.sources.iter().enumerate() {
                            if m.class[i][k] == class && row[g.obs(u, i)] == Track::Sink {
                                row[g.obs(u, i)] = Track::At { model: step.target, q: nq, class: nm.class[i][step.hom[n]] };
                            }
                        }
                    }
                    (row, asg.action_on_class(m, i, class))
                }
            };
            let ids = row
                .into_iter()
                .map(|t| {
                    *index.entry(t).or_insert_with(|| {
                        states.push(t);
                        queue.push_back(states.len() - 1);
                        states.len() - 1
                    })
                })
                .collect();
            if delta.len() <= s {
                delta.resize(s + 1, Vec::new());
                out.resize(s + 1, 0);
            }
            delta[s] = ids;
            out[s] = act;
        }
        delta.resize(states.len(), Vec::new());
        out.resize(states.len(), 0);
        let m = MooreMachine::new(
            g.observations(i).names().to_vec(),
            g.actions(i).names().to_vec(),
            0,
            delta,
            out,
        )?;
        machines.push(m.minimize());
    }
    Ok(StrategyProfile { machines })
}
