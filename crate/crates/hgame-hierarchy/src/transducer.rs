use std::collections::{HashMap, VecDeque};

use hgame_core::{GameGraph, Mode, WordAutomaton};

/// T^{ij}: states V, initial v0, all accepting; letters (b^i, b^j) encoded as
/// `b^i * |B^j| + b^j`, read on entering the target of a move.
pub fn observation_transducer(g: &GameGraph, i: usize, j: usize) -> WordAutomaton {
    let bi = g.observations(i);
    let bj = g.observations(j);
    let mut letters = Vec::with_capacity(bi.len() * bj.len());
    for x in bi.names() {
        for y in bj.names() {
            letters.push(format!("{x}/{y}"));
        }
    }
    let mut t = WordAutomaton::new(Mode::NfaFinite, letters, g.num_positions());
    t.state_names = g.positions().names().to_vec();
    t.initial = Some(g.initial());
    for v in 0..g.num_positions() {
        t.accepting[v] = true;
        for &w in g.successors(v) {
            t.add_transition(v, g.obs(w, i) * bj.len() + g.obs(w, j), w);
        }
    }
    t
}

/// Two accepted pair-words with equal first projections and different second projections,
/// with the state sequences of their runs (for T^{ij} these are histories).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonFunctional {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_run: Vec<usize>,
    pub right_run: Vec<usize>,
}

/// Decides whether a synchronous transducer over `Σ1 × Σ2` (letters `a * right + b`) is
/// functional; on failure returns a shortest counterexample.
pub fn is_functional(t: &WordAutomaton, right: usize) -> Result<(), NonFunctional> {
    let Some(q0) = t.initial else { return Ok(()) };
    let k = t.num_letters();
    // moves grouped by first component
    let left_size = k / right.max(1);
    let mut by_first: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); left_size]; t.num_states()];
    for q in 0..t.num_states() {
        for l in 0..k {
            for &r in &t.trans[q][l] {
                by_first[q][l / right].push((l, r));
            }
        }
    }
    type Node = (usize, usize, bool);
    let mut parent: HashMap<Node, Option<(Node, usize, usize)>> = HashMap::new();
    let start = (q0, q0, false);
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let (p, q, diff) = node;
        if diff && t.accepting[p] && t.accepting[q] {
            let mut left = Vec::new();
            let mut right_w = Vec::new();
            let mut lrun = vec![p];
            let mut rrun = vec![q];
            let mut cur = node;
            while let Some(Some((prev, a, b))) = parent.get(&cur).cloned() {
                left.push(a);
                right_w.push(b);
                lrun.push(prev.0);
                rrun.push(prev.1);
                cur = prev;
            }
            left.reverse();
            right_w.reverse();
            lrun.reverse();
            rrun.reverse();
            return Err(NonFunctional { left, right: right_w, left_run: lrun, right_run: rrun });
        }
        for a in 0..left_size {
            for &(l1, p2) in &by_first[p][a] {
                for &(l2, q2) in &by_first[q][a] {
                    let next = (p2, q2, diff || l1 != l2);
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some((node, l1, l2)));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Functionality of T^{ij}, returning the two histories of a counterexample.
pub fn functional_in_game(g: &GameGraph, i: usize, j: usize) -> Result<(), (Vec<usize>, Vec<usize>)> {
    let t = observation_transducer(g, i, j);
    is_functional(&t, g.observations(j).len()).map_err(|c| (c.left_run, c.right_run))
}
