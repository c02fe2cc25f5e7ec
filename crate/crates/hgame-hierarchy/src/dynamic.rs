use std::collections::{HashMap, VecDeque};

use hgame_core::{GameGraph, Mode, WordAutomaton};

use crate::config::{pack, player_pairs, unpack};

/// Three histories of equal length and two players with π ∼^i π′, π ∼^j π″, π′ ≁^i π″ and
/// π′ ≁^j π″, certifying that P^i(π) and P^j(π) are incomparable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncomparabilityWitness {
    pub i: usize,
    pub j: usize,
    pub pi: Vec<usize>,
    pub pi_i: Vec<usize>,
    pub pi_j: Vec<usize>,
}

impl IncomparabilityWitness {
    /// Number of moves of the witnessing histories.
    pub fn round(&self) -> usize {
        self.pi.len() - 1
    }

    /// Replays the four defining constraints through observation words.
    pub fn is_valid(&self, g: &GameGraph) -> bool {
        let ok = |p: &[usize]| g.is_history(p) && p.len() == self.pi.len();
        if !(ok(&self.pi) && ok(&self.pi_i) && ok(&self.pi_j)) || self.i == self.j {
            return false;
        }
        let w = |p: &[usize], k: usize| g.obs_word(p, k);
        w(&self.pi, self.i) == w(&self.pi_i, self.i)
            && w(&self.pi, self.j) == w(&self.pi_j, self.j)
            && w(&self.pi_i, self.i) != w(&self.pi_j, self.i)
            && w(&self.pi_i, self.j) != w(&self.pi_j, self.j)
    }
}

/// Shortest witness for one pair, by breadth-first search over (v, u, c, w, d).
pub fn pair_witness(g: &GameGraph, i: usize, j: usize) -> Option<IncomparabilityWitness> {
    let nv = g.num_positions();
    type Node = (usize, usize);
    let v0 = g.initial();
    let start: Node = (v0, pack(nv, v0, false, v0, false));
    let mut parent: HashMap<Node, Option<Node>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let (v, t) = node;
        if t & 3 == 3 {
            let mut pi = Vec::new();
            let mut pi_i = Vec::new();
            let mut pi_j = Vec::new();
            let mut cur = Some(node);
            while let Some(x) = cur {
                let (u, _, w, _) = unpack(nv, x.1);
                pi.push(x.0);
                pi_i.push(u);
                pi_j.push(w);
                cur = parent[&x];
            }
            pi.reverse();
            pi_i.reverse();
            pi_j.reverse();
            return Some(IncomparabilityWitness { i, j, pi, pi_i, pi_j });
        }
        let (u, c, w, d) = unpack(nv, t);
        for &v2 in g.successors(v) {
            for &u2 in g.successors(u) {
                if g.obs(u2, i) != g.obs(v2, i) {
                    continue;
                }
                for &w2 in g.successors(w) {
                    if g.obs(w2, j) != g.obs(v2, j) {
                        continue;
                    }
                    let c2 = c || g.obs(u2, j) != g.obs(w2, j);
                    let d2 = d || g.obs(u2, i) != g.obs(w2, i);
                    let next = (v2, pack(nv, u2, c2, w2, d2));
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some(node));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

/// Dynamic hierarchical information: at every history the information sets are totally
/// ordered by inclusion. Returns a shortest witness over all pairs on failure.
pub fn check_dynamic(g: &GameGraph) -> Result<(), IncomparabilityWitness> {
    let mut best: Option<IncomparabilityWitness> = None;
    for (i, j) in player_pairs(g.players()) {
        if let Some(w) = pair_witness(g, i, j) {
            if best.as_ref().is_none_or(|b| w.round() < b.round()) {
                best = Some(w);
            }
        }
    }
    match best {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// NFA over V reading whole histories v0 v1 … vℓ: after an initial state that consumes v0,
/// it guesses a pair i < j and tracks (u, c, w, d); accepting iff c = d = 1. On words that are
/// histories of `g` it accepts exactly the non-hierarchical ones. Only reachable states are
/// built, so the count is at most 1 + 4·n(n−1)/2·|V|².
pub fn non_hierarchy_nfa(g: &GameGraph) -> WordAutomaton {
    let nv = g.num_positions();
    let letters = g.positions().names().to_vec();
    let mut a = WordAutomaton::new(Mode::NfaFinite, letters, 1);
    a.state_names[0] = "init".into();
    let pairs = player_pairs(g.players());
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |a: &mut WordAutomaton, queue: &mut VecDeque<(usize, usize, usize)>, p: usize, t: usize| -> usize {
        if let Some(&q) = index.get(&(p, t)) {
            return q;
        }
        let (u, c, w, d) = unpack(nv, t);
        let (i, j) = pairs[p];
        let q = a.add_state(format!(
            "{}{}:{},{},{},{}",
            i + 1,
            j + 1,
            g.position_name(u),
            u8::from(c),
            g.position_name(w),
            u8::from(d)
        ));
        a.accepting[q] = c && d;
        index.insert((p, t), q);
        queue.push_back((p, t, q));
        q
    };
    let v0 = g.initial();
    for p in 0..pairs.len() {
        let q = intern(&mut a, &mut queue, p, pack(nv, v0, false, v0, false));
        a.add_transition(0, v0, q);
    }
    while let Some((p, t, from)) = queue.pop_front() {
        let (i, j) = pairs[p];
        let (u, c, w, d) = unpack(nv, t);
        for v in 0..nv {
            for &u2 in g.successors(u) {
                if g.obs(u2, i) != g.obs(v, i) {
                    continue;
                }
                for &w2 in g.successors(w) {
                    if g.obs(w2, j) != g.obs(v, j) {
                        continue;
                    }
                    let c2 = c || g.obs(u2, j) != g.obs(w2, j);
                    let d2 = d || g.obs(u2, i) != g.obs(w2, i);
                    let to = intern(&mut a, &mut queue, p, pack(nv, u2, c2, w2, d2));
                    a.add_transition(from, v, to);
                }
            }
        }
    }
    a
}

/// Synchronised product of [`non_hierarchy_nfa`] with the move structure of `g`: accepts
/// exactly the non-hierarchical histories.
pub fn non_hierarchy_product(g: &GameGraph) -> WordAutomaton {
    let raw = non_hierarchy_nfa(g);
    let mut a = WordAutomaton::new(Mode::NfaFinite, raw.letters.clone(), 1);
    a.state_names[0] = "init".into();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let v0 = g.initial();
    for &q in raw.successors(0, v0) {
        let id = a.add_state(format!("{}@{}", raw.state_names[q], g.position_name(v0)));
        a.accepting[id] = raw.accepting[q];
        index.insert((q, v0), id);
        a.add_transition(0, v0, id);
        queue.push_back((q, v0));
    }
    while let Some((q, v)) = queue.pop_front() {
        let from = index[&(q, v)];
        for &x in g.successors(v) {
            for &q2 in raw.successors(q, x) {
                let to = *index.entry((q2, x)).or_insert_with(|| {
                    let id = a.add_state(format!("{}@{}", raw.state_names[q2], g.position_name(x)));
                    a.accepting[id] = raw.accepting[q2];
                    queue.push_back((q2, x));
                    id
                });
                a.add_transition(from, x, to);
            }
        }
    }
    a
}

/// The state bound 2n²|V|² for [`non_hierarchy_nfa`].
pub fn non_hierarchy_bound(g: &GameGraph) -> usize {
    let n = g.players();
    let v = g.num_positions();
    2 * n * n * v * v
}
