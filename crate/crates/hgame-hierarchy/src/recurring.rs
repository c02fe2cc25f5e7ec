use std::collections::HashMap;

use hgame_core::automaton::odd_cycle;
use hgame_core::{CoreError, GameGraph, Mode, Result, WordAutomaton};

use crate::config::{update_configuration, Configuration};
use crate::dynamic::non_hierarchy_product;

pub const DEFAULT_MAX_CONFIGURATIONS: usize = 1_000_000;

/// A play τρ^ω along which every history of length ≥ |τ| fails hierarchical information.
/// `prefix` starts at v0 and ends at the cycle entry x; `cycle` lists the positions after x,
/// ending back at x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWitness {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoWitness {
    /// Replays the configurations along τ and then around ρ until the configuration at the
    /// cycle entry repeats; every configuration met from τ on must be non-hierarchical.
    pub fn replays(&self, g: &GameGraph) -> bool {
        let (Some(&x), Some(&last)) = (self.prefix.last(), self.cycle.last()) else {
            return false;
        };
        if x != last || self.prefix[0] != g.initial() {
            return false;
        }
        let mut path = self.prefix.clone();
        path.extend_from_slice(&self.cycle);
        if !g.is_history(&path) {
            return false;
        }
        let mut z = Configuration::initial(g);
        for &v in &self.prefix[1..] {
            z = update_configuration(v, &z, g);
        }
        let mut seen = vec![z.clone()];
        loop {
            if z.is_hierarchical() {
                return false;
            }
            for &v in &self.cycle {
                z = update_configuration(v, &z, g);
                if z.is_hierarchical() {
                    return false;
                }
            }
            if seen.contains(&z) {
                return true;
            }
            seen.push(z.clone());
        }
    }

    /// τρ unrolled, for reporting.
    pub fn path(&self) -> Vec<usize> {
        let mut p = self.prefix.clone();
        p.extend_from_slice(&self.cycle);
        p
    }
}

/// Reachable (position, configuration) graph; node 0 is (v0, initial). Edges are labelled by
/// the position entered.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub nodes: Vec<(usize, Configuration)>,
    pub edges: Vec<Vec<(usize, usize)>>,
    pub hierarchical: Vec<bool>,
}

pub fn explore(g: &GameGraph, cap: usize) -> Result<Exploration> {
    let start = (g.initial(), Configuration::initial(g));
    let mut index: HashMap<(usize, Configuration), usize> = HashMap::new();
    let mut nodes = vec![start.clone()];
    index.insert(start, 0);
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut k = 0;
    while k < nodes.len() {
        let (v, z) = nodes[k].clone();
        let mut out = Vec::new();
        for &v2 in g.successors(v) {
            let key = (v2, update_configuration(v2, &z, g));
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if nodes.len() >= cap {
                        return Err(CoreError::Cap {
                            what: format!("configurations ({} explored)", nodes.len()),
                            limit: cap,
                        });
                    }
                    let id = nodes.len();
                    nodes.push(key.clone());
                    index.insert(key, id);
                    id
                }
            };
            out.push((v2, id));
        }
        edges.push(out);
        k += 1;
    }
    let hierarchical = nodes.iter().map(|(_, z)| z.is_hierarchical()).collect();
    Ok(Exploration { nodes, edges, hierarchical })
}

fn lasso_in(g: &GameGraph, ex: &Exploration) -> Option<LassoWitness> {
    let rank: Vec<u32> = ex.hierarchical.iter().map(|&h| if h { 2 } else { 1 }).collect();
    let (pre, cyc) = odd_cycle(ex.nodes.len(), 0, &ex.edges, &rank)?;
    let mut prefix = vec![g.initial()];
    prefix.extend(pre.iter().map(|s| s.0));
    Some(LassoWitness { prefix, cycle: cyc.iter().map(|s| s.0).collect() })
}

/// `None` iff every play has infinitely many hierarchical prefixes.
pub fn check_recurring(g: &GameGraph, cap: usize) -> Result<Option<LassoWitness>> {
    let ex = explore(g, cap)?;
    Ok(lasso_in(g, &ex))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gap {
    Bounded(usize),
    Unbounded,
}

/// Longest run of consecutive non-hierarchical rounds over all plays.
pub fn gap_size(g: &GameGraph, cap: usize) -> Result<Gap> {
    let ex = explore(g, cap)?;
    if lasso_in(g, &ex).is_some() {
        return Ok(Gap::Unbounded);
    }
    // non-hierarchical nodes induce a DAG; longest chain ending at each node
    let n = ex.nodes.len();
    let mut indeg = vec![0usize; n];
    for (x, row) in ex.edges.iter().enumerate() {
        if ex.hierarchical[x] {
            continue;
        }
        for &(_, t) in row {
            if !ex.hierarchical[t] {
                indeg[t] += 1;
            }
        }
    }
    let mut len = vec![0usize; n];
    let mut stack: Vec<usize> = (0..n).filter(|&x| !ex.hierarchical[x] && indeg[x] == 0).collect();
    for &x in &stack {
        len[x] = 1;
    }
    let mut best = 0;
    while let Some(x) = stack.pop() {
        best = best.max(len[x]);
        for &(_, t) in &ex.edges[x] {
            if ex.hierarchical[t] {
                continue;
            }
            len[t] = len[t].max(len[x] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    Ok(Gap::Bounded(best))
}

/// Deterministic Büchi automaton over V accepting the plays with infinitely many hierarchical
/// prefixes. Words that leave the game fall into an accepting sink.
pub fn recurring_buchi(g: &GameGraph, cap: usize) -> Result<WordAutomaton> {
    let d = non_hierarchy_product(g).determinize_capped(cap)?;
    let mut b = d.complement();
    b.mode = Mode::Buchi;
    Ok(b)
}

/// |V|·2^(2n²|V|²), saturating.
pub fn recurring_bound(g: &GameGraph) -> u128 {
    let n = g.players() as u32;
    let v = g.num_positions() as u32;
    let e = 2 * n * n * v * v;
    if e >= 120 {
        u128::MAX
    } else {
        (v as u128) << e
    }
}
