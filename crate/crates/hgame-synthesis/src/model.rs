use hgame_core::GameGraph;

use crate::error::{cap, Result};

/// Kripke structure over game positions: every node carries a position, and every player
/// has an equivalence over the nodes given by class labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpistemicModel {
    pub pos: Vec<usize>,
    /// `class[i][k]`: the ∼^i class of node k, numbered by first occurrence.
    pub class: Vec<Vec<usize>>,
}

fn renumber(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<(usize, usize)> = Vec::new();
    labels
        .iter()
        .map(|&l| match seen.iter().find(|(x, _)| *x == l) {
            Some(&(_, c)) => c,
            None => {
                let c = seen.len();
                seen.push((l, c));
                c
            }
        })
        .collect()
}

impl EpistemicModel {
    /// Class labels may be arbitrary; they are renumbered by first occurrence.
    pub fn new(pos: Vec<usize>, class: Vec<Vec<usize>>) -> Self {
        let class = class.iter().map(|c| renumber(c)).collect();
        EpistemicModel { pos, class }
    }

    /// The single node at v0.
    pub fn initial(g: &GameGraph) -> Self {
        EpistemicModel { pos: vec![g.initial()], class: vec![vec![0]; g.players()] }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn players(&self) -> usize {
        self.class.len()
    }

    pub fn num_classes(&self, i: usize) -> usize {
        self.class[i].iter().max().map_or(0, |&c| c + 1)
    }

    pub fn related(&self, i: usize, k: usize, l: usize) -> bool {
        self.class[i][k] == self.class[i][l]
    }

    /// Connected under the union of all ∼^i.
    pub fn is_connected(&self) -> bool {
        components(self.len(), &self.class).iter().all(|&c| c == 0)
    }

    /// Every pair of relations is ordered by inclusion.
    pub fn is_chain_ordered(&self) -> bool {
        let n = self.players();
        let within = |i: usize, j: usize| {
            // ∼^i ⊆ ∼^j
            let mut m: Vec<Option<usize>> = vec![None; self.num_classes(i)];
            (0..self.len()).all(|k| {
                let c = self.class[i][k];
                let d = self.class[j][k];
                *m[c].get_or_insert(d) == d
            })
        };
        (0..n).all(|i| (i + 1..n).all(|j| within(i, j) || within(j, i)))
    }

    /// The submodel on the given nodes, in the given order.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        EpistemicModel::new(
            nodes.iter().map(|&k| self.pos[k]).collect(),
            self.class.iter().map(|c| nodes.iter().map(|&k| c[k]).collect()).collect(),
        )
    }

    /// The colour shared by all nodes, if any.
    pub fn color(&self, g: &GameGraph) -> Option<usize> {
        let c = g.color(*self.pos.first()?);
        self.pos.iter().all(|&v| g.color(v) == c).then_some(c)
    }

    /// Sorted set of positions, invariant under homomorphic equivalence.
    pub fn fingerprint(&self) -> Vec<usize> {
        let mut p = self.pos.clone();
        p.sort_unstable();
        p.dedup();
        p
    }
}

/// Component id of every node under the union of the relations, numbered by first node.
fn components(len: usize, class: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..len).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for c in class {
        let mut first: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for k in 0..len {
            match first.get(&c[k]) {
                Some(&l) => {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, l));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    first.insert(c[k], k);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..len).map(|k| find(&mut parent, k)).collect();
    renumber(&roots)
}

/// An action profile for every node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionAssignment {
    pub profiles: Vec<Vec<usize>>,
}

impl ActionAssignment {
    /// `choice[i][c]` is the action of player i on its class c.
    pub fn from_classes(m: &EpistemicModel, choice: &[Vec<usize>]) -> Self {
        let profiles = (0..m.len()).map(|k| (0..m.players()).map(|i| choice[i][m.class[i][k]]).collect()).collect();
        ActionAssignment { profiles }
    }

    /// k ∼^i l implies equal actions of i.
    pub fn is_consistent(&self, m: &EpistemicModel) -> bool {
        (0..m.players()).all(|i| {
            (0..m.len()).all(|k| (0..m.len()).all(|l| !m.related(i, k, l) || self.profiles[k][i] == self.profiles[l][i]))
        })
    }

    /// Action of player i on its class c.
    pub fn action_on_class(&self, m: &EpistemicModel, i: usize, c: usize) -> usize {
        let k = m.class[i].iter().position(|&x| x == c).expect("class exists");
        self.profiles[k][i]
    }
}

/// All information-consistent assignments, in mixed-radix order over (player, class) with
/// player 0's first class varying fastest.
pub fn assignments(m: &EpistemicModel, g: &GameGraph, limit: usize) -> Result<Vec<ActionAssignment>> {
    let slots: Vec<(usize, usize)> =
        (0..m.players()).flat_map(|i| (0..m.num_classes(i)).map(move |c| (i, c))).collect();
    let mut total: usize = 1;
    for &(i, _) in &slots {
        total = total.saturating_mul(g.actions(i).len());
        if total > limit {
            return Err(cap(format!("action assignments on a model with {} nodes", m.len()), limit));
        }
    }
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; slots.len()];
    loop {
        let mut choice: Vec<Vec<usize>> = (0..m.players()).map(|i| vec![0; m.num_classes(i)]).collect();
        for (s, &(i, c)) in slots.iter().enumerate() {
            choice[i][c] = digits[s];
        }
        out.push(ActionAssignment::from_classes(m, &choice));
        let mut s = 0;
        loop {
            if s == slots.len() {
                return Ok(out);
            }
            digits[s] += 1;
            if digits[s] < g.actions(slots[s].0).len() {
                break;
            }
            digits[s] = 0;
            s += 1;
        }
    }
}

/// One connected component of an update; node n of `model` is the pair `sources[n]` of an
/// old node and a move target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub model: EpistemicModel,
    pub sources: Vec<(usize, usize)>,
}

/// Nodes (k, w) for every w reachable from k under its profile; (k, w) ∼^i (l, u) iff
/// k ∼^i l and β^i(w) = β^i(u). Split into components, ordered by their first node.
pub fn update_components(m: &EpistemicModel, a: &ActionAssignment, g: &GameGraph) -> Vec<Component> {
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    for k in 0..m.len() {
        for &w in g.post(m.pos[k], g.encode_profile(&a.profiles[k])) {
            nodes.push((k, w));
        }
    }
    let n = m.players();
    let labels: Vec<Vec<usize>> = (0..n)
        .map(|i| nodes.iter().map(|&(k, w)| m.class[i][k] * g.observations(i).len() + g.obs(w, i)).collect())
        .collect();
    let comp = components(nodes.len(), &labels);
    let count = comp.iter().max().map_or(0, |&c| c + 1);
    (0..count)
        .map(|c| {
            let members: Vec<usize> = (0..nodes.len()).filter(|&x| comp[x] == c).collect();
            Component {
                model: EpistemicModel::new(
                    members.iter().map(|&x| nodes[x].1).collect(),
                    labels.iter().map(|l| members.iter().map(|&x| l[x]).collect()).collect(),
                ),
                sources: members.iter().map(|&x| nodes[x]).collect(),
            }
        })
        .collect()
}

pub fn epistemic_update(m: &EpistemicModel, a: &ActionAssignment, g: &GameGraph) -> Vec<EpistemicModel> {
    update_components(m, a, g).into_iter().map(|c| c.model).collect()
}

/// A map f on nodes with pos(f(k)) = pos(k) and k ∼^i l ⇒ f(k) ∼^i f(l), avoiding
/// `forbid` in its image. Backtracking in breadth-first order along the relations.
fn search(m1: &EpistemicModel, m2: &EpistemicModel, forbid: Option<usize>) -> Option<Vec<usize>> {
    let n = m1.players();
    if n != m2.players() {
        return None;
    }
    let order = bfs_order(m1);
    let cands: Vec<Vec<usize>> = (0..m1.len())
        .map(|k| (0..m2.len()).filter(|&t| m2.pos[t] == m1.pos[k] && Some(t) != forbid).collect())
        .collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut f = vec![usize::MAX; m1.len()];
    // class map per player with reference counts, so undo is a decrement
    let mut cmap: Vec<Vec<(usize, usize)>> = (0..n).map(|i| vec![(usize::MAX, 0); m1.num_classes(i)]).collect();
    fn go(
        d: usize,
        order: &[usize],
        cands: &[Vec<usize>],
        m1: &EpistemicModel,
        m2: &EpistemicModel,
        f: &mut [usize],
        cmap: &mut [Vec<(usize, usize)>],
    ) -> bool {
        if d == order.len() {
            return true;
        }
        let k = order[d];
        for &t in &cands[k] {
            let ok = (0..m1.players()).all(|i| {
                let (img, _) = cmap[i][m1.class[i][k]];
                img == usize::MAX || img == m2.class[i][t]
            });
            if !ok {
                continue;
            }
            for (i, row) in cmap.iter_mut().enumerate() {
                let e = &mut row[m1.class[i][k]];
                e.0 = m2.class[i][t];
                e.1 += 1;
            }
            f[k] = t;
            if go(d + 1, order, cands, m1, m2, f, cmap) {
                return true;
            }
            for (i, row) in cmap.iter_mut().enumerate() {
                let e = &mut row[m1.class[i][k]];
                e.1 -= 1;
                if e.1 == 0 {
                    e.0 = usize::MAX;
                }
            }
        }
        false
    }
    go(0, &order, &cands, m1, m2, &mut f, &mut cmap).then_some(f)
}

fn bfs_order(m: &EpistemicModel) -> Vec<usize> {
    let mut seen = vec![false; m.len()];
    let mut order = Vec::with_capacity(m.len());
    for s in 0..m.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(k) = q.pop_front() {
            order.push(k);
            for l in 0..m.len() {
                if !seen[l] && (0..m.players()).any(|i| m.related(i, k, l)) {
                    seen[l] = true;
                    q.push_back(l);
                }
            }
        }
    }
    order
}

pub fn homomorphism(m1: &EpistemicModel, m2: &EpistemicModel) -> Option<Vec<usize>> {
    search(m1, m2, None)
}

pub fn homomorphic_equiv(m1: &EpistemicModel, m2: &EpistemicModel) -> bool {
    m1.fingerprint() == m2.fingerprint() && homomorphism(m1, m2).is_some() && homomorphism(m2, m1).is_some()
}

/// A homomorphically equivalent submodel with no proper endomorphism, and the map onto it.
pub fn core(m: &EpistemicModel) -> (EpistemicModel, Vec<usize>) {
    let mut cur = m.clone();
    let mut total: Vec<usize> = (0..m.len()).collect();
    'shrink: loop {
        for x in 0..cur.len() {
            if let Some(f) = search(&cur, &cur, Some(x)) {
                let mut image = f.clone();
                image.sort_unstable();
                image.dedup();
                let at = |t: usize| image.binary_search(&t).expect("in image");
                total = total.iter().map(|&k| at(f[k])).collect();
                cur = cur.induced(&image);
                continue 'shrink;
            }
        }
        return (cur, total);
    }
}
