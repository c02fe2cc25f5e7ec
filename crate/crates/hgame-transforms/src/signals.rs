use std::collections::HashMap;

use hgame_core::product::product_with_signals;
use hgame_core::{CoreError, GameGraph, MooreMachine, Signal};
use hgame_hierarchy::check_dynamic;

use crate::error::{Result, TransformError};

pub const DEFAULT_MAX_TRACKER_STATES: usize = 1_000_000;

/// What the players know after a history ending at `v`: `know[j]` holds the last positions
/// of histories in P^j(π); `flags[i][j]` maps each u ∈ know[i] to whether some history in
/// P^i(π) ending at u lies outside P^j(π).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Knowledge {
    pub v: usize,
    pub know: Vec<Vec<usize>>,
    pub flags: Vec<Vec<Vec<(usize, bool)>>>,
}

impl Knowledge {
    fn initial(g: &GameGraph) -> Self {
        let n = g.players();
        let v0 = g.initial();
        Knowledge {
            v: v0,
            know: vec![vec![v0]; n],
            flags: (0..n).map(|i| (0..n).map(|j| if i == j { Vec::new() } else { vec![(v0, false)] }).collect()).collect(),
        }
    }

    fn step(&self, g: &GameGraph, v2: usize) -> Self {
        let n = g.players();
        let know = (0..n)
            .map(|j| {
                let mut k: Vec<usize> = self.know[j]
                    .iter()
                    .flat_map(|&u| g.successors(u).iter().copied())
                    .filter(|&u2| g.obs(u2, j) == g.obs(v2, j))
                    .collect();
                k.sort_unstable();
                k.dedup();
                k
            })
            .collect();
        let flags = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            return Vec::new();
                        }
                        let mut best: HashMap<usize, bool> = HashMap::new();
                        for &(u, f) in &self.flags[i][j] {
                            for &u2 in g.successors(u) {
                                if g.obs(u2, i) == g.obs(v2, i) {
                                    let e = best.entry(u2).or_insert(false);
                                    *e |= f || g.obs(u2, j) != g.obs(v2, j);
                                }
                            }
                        }
                        let mut s: Vec<(usize, bool)> = best.into_iter().collect();
                        s.sort_unstable();
                        s
                    })
                    .collect()
            })
            .collect();
        Knowledge { v: v2, know, flags }
    }

    /// P^i(π) ⊆ P^j(π).
    pub fn below(&self, i: usize, j: usize) -> bool {
        i == j || self.flags[i][j].iter().all(|&(_, f)| !f)
    }

    /// 1 + |{ j : j strictly below i, or j < i and j equivalent to i }|.
    pub fn rank(&self, i: usize) -> usize {
        let n = self.know.len();
        1 + (0..n)
            .filter(|&j| {
                if j == i {
                    return false;
                }
                let (ji, ij) = (self.below(j, i), self.below(i, j));
                (ji && !ij) || (j < i && ji && ij)
            })
            .count()
    }

    /// λ^i_j: the observations of player i at positions player j considers possible.
    pub fn lambda(&self, g: &GameGraph, i: usize, j: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.know[j].iter().map(|&u| g.obs(u, i)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// Deterministic automaton over V whose states are [`Knowledge`] values; letters that are not
/// successors of the current position lead to an absorbing sink (`None`).
#[derive(Clone, Debug)]
pub struct KnowledgeTracker {
    pub states: Vec<Option<Knowledge>>,
    pub delta: Vec<Vec<usize>>,
}

impl KnowledgeTracker {
    pub fn build(g: &GameGraph, cap: usize) -> Result<Self> {
        let nv = g.num_positions();
        let k0 = Knowledge::initial(g);
        let mut index: HashMap<Knowledge, usize> = HashMap::new();
        index.insert(k0.clone(), 0);
        let mut states = vec![Some(k0), None];
        let mut delta = vec![Vec::new(), vec![1; nv]];
        let mut k = 0;
        while k < states.len() {
            if k == 1 {
                k += 1;
                continue;
            }
            let cur = states[k].clone().expect("live state");
            let mut row = vec![1; nv];
            for &v2 in g.successors(cur.v) {
                let next = cur.step(g, v2);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(CoreError::Cap { what: "knowledge states".into(), limit: cap }.into());
                        }
                        let id = states.len();
                        index.insert(next.clone(), id);
                        states.push(Some(next));
                        delta.push(Vec::new());
                        id
                    }
                };
                row[v2] = id;
            }
            delta[k] = row;
            k += 1;
        }
        Ok(KnowledgeTracker { states, delta })
    }

    pub fn machine(&self, g: &GameGraph, outputs: Vec<String>, f: impl Fn(Option<&Knowledge>) -> usize) -> MooreMachine {
        let out = self.states.iter().map(|s| f(s.as_ref())).collect();
        MooreMachine::new(g.positions().names().to_vec(), outputs, 0, self.delta.clone(), out)
            .expect("tracker machines are total")
            .minimize()
    }
}

fn require_dynamic(g: &GameGraph) -> Result<()> {
    check_dynamic(g).map_err(|w| TransformError::NotDynamic(Box::new(w)))
}

/// Moore machine over V emitting rank^i(π) ("1" = most informed).
pub fn rank_signal(g: &GameGraph, i: usize) -> Result<MooreMachine> {
    require_dynamic(g)?;
    let t = KnowledgeTracker::build(g, DEFAULT_MAX_TRACKER_STATES)?;
    let names = (1..=g.players()).map(|r| r.to_string()).collect();
    Ok(t.machine(g, names, |s| s.map_or(i, |k| k.rank(i) - 1)))
}

/// Moore machine over V emitting "1" iff P^i(π) ⊆ P^j(π).
pub fn relative_order_signal(g: &GameGraph, i: usize, j: usize) -> Result<MooreMachine> {
    require_dynamic(g)?;
    let t = KnowledgeTracker::build(g, DEFAULT_MAX_TRACKER_STATES)?;
    Ok(t.machine(g, vec!["0".into(), "1".into()], |s| s.map_or(1, |k| usize::from(k.below(i, j)))))
}

/// A game whose positions carry per-player ranks, relative-order bits and the λ signals.
#[derive(Clone, Debug)]
pub struct RankAnnotatedGame {
    pub game: GameGraph,
    /// Position of the input game each position copies.
    pub origin: Vec<usize>,
    /// `rank[v][i]`, 1-based.
    pub rank: Vec<Vec<usize>>,
    /// `below[v][i][j]` iff i ⪯_v j.
    pub below: Vec<Vec<Vec<bool>>>,
    /// `lambda[v][i][j]` = λ^i_j at v, as observation names of player i (ordered by the
    /// input game's ids; the product may renumber its alphabets).
    pub lambda: Vec<Vec<Vec<Vec<String>>>>,
}

pub fn annotate_ranks(g: &GameGraph) -> Result<RankAnnotatedGame> {
    annotate_ranks_capped(g, DEFAULT_MAX_TRACKER_STATES)
}

pub fn annotate_ranks_capped(g: &GameGraph, cap: usize) -> Result<RankAnnotatedGame> {
    require_dynamic(g)?;
    let t = KnowledgeTracker::build(g, cap)?;
    let m = MooreMachine::new(g.positions().names().to_vec(), vec!["-".into()], 0, t.delta.clone(), vec![0; t.states.len()])?;
    let p = product_with_signals(g, &[Signal { machine: m, expose: None }])?;
    let n = g.players();
    let mut rank = Vec::new();
    let mut below = Vec::new();
    let mut lambda = Vec::new();
    for ms in &p.states {
        let k = t.states[ms[0]].as_ref().expect("products follow moves");
        rank.push((0..n).map(|i| k.rank(i)).collect());
        below.push((0..n).map(|i| (0..n).map(|j| k.below(i, j)).collect()).collect());
        lambda.push(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| k.lambda(g, i, j).into_iter().map(|b| g.observations(i).name(b).to_string()).collect())
                        .collect()
                })
                .collect(),
        );
    }
    Ok(RankAnnotatedGame { game: p.game, origin: p.origin, rank, below, lambda })
}
