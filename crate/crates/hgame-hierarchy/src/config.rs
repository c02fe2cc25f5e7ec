use hgame_core::GameGraph;

/// Tuple (u, c, w, d) of a cell, packed as `((u * |V| + w) << 2) | (c << 1) | d`.
pub type Tuple = usize;

pub fn pack(nv: usize, u: usize, c: bool, w: usize, d: bool) -> Tuple {
    ((u * nv + w) << 2) | (usize::from(c) << 1) | usize::from(d)
}

pub fn unpack(nv: usize, t: Tuple) -> (usize, bool, usize, bool) {
    let uw = t >> 2;
    (uw / nv, t & 2 != 0, uw % nv, t & 1 != 0)
}

/// One cell Z_{i,j}: a sorted set of tuples.
pub type Cell = Vec<Tuple>;

/// One cell per unordered pair i < j, in lexicographic pair order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub cells: Vec<Cell>,
}

pub fn player_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

impl Configuration {
    /// Every cell holds (v0, 0, v0, 0).
    pub fn initial(g: &GameGraph) -> Self {
        let nv = g.num_positions();
        let t = pack(nv, g.initial(), false, g.initial(), false);
        Configuration { cells: player_pairs(g.players()).iter().map(|_| vec![t]).collect() }
    }

    /// The history is hierarchical iff no cell holds a tuple with both flags set.
    pub fn is_hierarchical(&self) -> bool {
        self.cells.iter().all(|c| c.iter().all(|&t| t & 3 != 3))
    }

    /// Index of the first pair whose cell has a doubly-flagged tuple.
    pub fn violating_pair(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.iter().any(|&t| t & 3 == 3))
    }
}

/// Successor configuration after the history is extended by `v`.
pub fn update_configuration(v: usize, z: &Configuration, g: &GameGraph) -> Configuration {
    let nv = g.num_positions();
    let pairs = player_pairs(g.players());
    let cells = pairs
        .iter()
        .zip(&z.cells)
        .map(|(&(i, j), cell)| {
            let mut out = Vec::new();
            for &t in cell {
                let (u, c, w, d) = unpack(nv, t);
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
                        out.push(pack(nv, u2, c2, w2, d2));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    Configuration { cells }
}

/// Configuration reached along a history (its first position must be v0).
pub fn configuration_of(g: &GameGraph, path: &[usize]) -> Configuration {
    let mut z = Configuration::initial(g);
    for &v in &path[1..] {
        z = update_configuration(v, &z, g);
    }
    z
}
