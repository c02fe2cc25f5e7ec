use crate::transducer::functional_in_game;
use hgame_core::GameGraph;

/// A pair of players that can be ordered in neither direction. `i_not_below_j` holds two
/// histories with equal β^i and different β^j; `j_not_below_i` the converse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRefutation {
    pub i: usize,
    pub j: usize,
    pub i_not_below_j: (Vec<usize>, Vec<usize>),
    pub j_not_below_i: (Vec<usize>, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaticResult {
    /// Players listed most-informed first.
    Ordered(Vec<usize>),
    Refuted(Vec<PairRefutation>),
}

impl StaticResult {
    pub fn is_ok(&self) -> bool {
        matches!(self, StaticResult::Ordered(_))
    }
}

/// `below[i][j]` iff i ⪯ j, i.e. β^i(π) determines β^j(π) on all histories.
pub fn information_preorder(g: &GameGraph) -> Vec<Vec<bool>> {
    let n = g.players();
    (0..n)
        .map(|i| (0..n).map(|j| i == j || functional_in_game(g, i, j).is_ok()).collect())
        .collect()
}

/// Static hierarchical information: a total order with P^i(π) ⊆ P^j(π) whenever i ⪯ j.
/// Equally informed players are ordered by index.
pub fn check_static(g: &GameGraph) -> StaticResult {
    let n = g.players();
    let mut refutations = Vec::new();
    let mut below = vec![vec![true; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ij = functional_in_game(g, i, j);
            let ji = functional_in_game(g, j, i);
            below[i][j] = ij.is_ok();
            below[j][i] = ji.is_ok();
            if let (Err(a), Err(b)) = (ij, ji) {
                refutations.push(PairRefutation { i, j, i_not_below_j: a, j_not_below_i: b });
            }
        }
    }
    if !refutations.is_empty() {
        return StaticResult::Refuted(refutations);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ab = below[a][b];
        let ba = below[b][a];
        match (ab, ba) {
            (true, false) => std::cmp::Ordering::Less,
            (false, true) => std::cmp::Ordering::Greater,
            _ => a.cmp(&b),
        }
    });
    StaticResult::Ordered(order)
}
