#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use hgame_core::game::histories_of_length;
use hgame_core::{GameBuilder, GameGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> GameGraph {
    let path = fixture_dir().join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    hgame_core::doc::parse_game(&text).unwrap()
}

pub fn fixture_games() -> Vec<(String, GameGraph)> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(fixture_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let text = std::fs::read_to_string(&p).unwrap();
        if hgame_core::doc::peek_kind(&text).ok().as_deref() == Some("game") {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            out.push((name, hgame_core::doc::parse_game(&text).unwrap()));
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub players: (usize, usize),
    pub positions: usize,
    pub actions: usize,
    pub observations: usize,
    /// Maximal number of distinct successors of a position.
    pub out_degree: usize,
}

pub const SMALL: Shape = Shape { players: (2, 3), positions: 6, actions: 2, observations: 3, out_degree: 3 };

/// A random complete game: each position picks a successor set of size ≤ out_degree and each
/// action profile leads to one or two of those successors.
pub fn random_game(seed: u64, s: Shape) -> GameGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(s.players.0..=s.players.1);
    let nv = rng.gen_range(1..=s.positions);
    let mut b = GameBuilder::new(n);
    let mut sizes = Vec::new();
    for i in 0..n {
        let k = rng.gen_range(1..=s.actions);
        for a in 0..k {
            b.action(i, &format!("a{a}"));
        }
        sizes.push(k);
    }
    let nobs: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=s.observations)).collect();
    for v in 0..nv {
        let obs: Vec<String> = nobs.iter().map(|&k| format!("o{}", rng.gen_range(0..k))).collect();
        b.add_position(&format!("v{v}"), &obs, None);
    }
    b.set_initial(0);
    for v in 0..nv {
        let d = rng.gen_range(1..=s.out_degree.min(nv));
        let mut succ: Vec<usize> = Vec::new();
        while succ.len() < d {
            let t = rng.gen_range(0..nv);
            if !succ.contains(&t) {
                succ.push(t);
            }
        }
        for p in hgame_core::game::all_profiles(&sizes) {
            let t = succ[rng.gen_range(0..d)];
            b.add_move(v, p.clone(), t);
            if rng.gen_bool(0.3) {
                b.add_move(v, p, succ[rng.gen_range(0..d)]);
            }
        }
        // every chosen successor is used by some profile
        for &t in &succ {
            let p = hgame_core::game::all_profiles(&sizes)[rng.gen_range(0..sizes.iter().product::<usize>())].clone();
            b.add_move(v, p, t);
        }
    }
    b.build().unwrap()
}

/// Information-set structure of all histories of one length: for each player, histories
/// grouped by observation word.
pub struct Layer {
    pub paths: Vec<Vec<usize>>,
    /// words[i][k] = observation word of history k for player i, as a group id
    pub words: Vec<Vec<usize>>,
}

impl Layer {
    pub fn new(g: &GameGraph, len: usize) -> Self {
        let paths: Vec<Vec<usize>> =
            histories_of_length(g, len, 10_000_000).unwrap().into_iter().map(|h| h.path).collect();
        let words = (0..g.players())
            .map(|i| {
                let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
                paths
                    .iter()
                    .map(|p| {
                        let k = ids.len();
                        *ids.entry(g.obs_word(p, i)).or_insert(k)
                    })
                    .collect()
            })
            .collect();
        Layer { paths, words }
    }

    /// For each history, whether P^i ⊆ P^j: every history with the same i-word has the same j-word.
    pub fn included(&self, i: usize, j: usize) -> Vec<bool> {
        let mut jword: HashMap<usize, Option<usize>> = HashMap::new();
        for k in 0..self.paths.len() {
            let e = jword.entry(self.words[i][k]).or_insert(Some(self.words[j][k]));
            if *e != Some(self.words[j][k]) {
                *e = None;
            }
        }
        (0..self.paths.len()).map(|k| jword[&self.words[i][k]].is_some()).collect()
    }

    /// Whether each history is hierarchical: information sets pairwise comparable.
    pub fn hierarchical(&self, n: usize) -> Vec<bool> {
        let mut out = vec![true; self.paths.len()];
        for i in 0..n {
            for j in i + 1..n {
                let a = self.included(i, j);
                let b = self.included(j, i);
                for k in 0..out.len() {
                    out[k] &= a[k] || b[k];
                }
            }
        }
        out
    }
}

/// below[i][j] iff β^i determines β^j on every history of length ≤ depth.
pub fn brute_static(g: &GameGraph, depth: usize) -> Vec<Vec<bool>> {
    let n = g.players();
    let mut below = vec![vec![true; n]; n];
    for len in 0..=depth {
        let layer = Layer::new(g, len);
        for i in 0..n {
            for j in 0..n {
                if i != j && below[i][j] {
                    below[i][j] = layer.included(i, j).iter().all(|&x| x);
                }
            }
        }
    }
    below
}

/// Length of the shortest non-hierarchical history up to `depth`.
pub fn brute_dynamic(g: &GameGraph, depth: usize) -> Option<usize> {
    (0..=depth).find(|&len| Layer::new(g, len).hierarchical(g.players()).iter().any(|&h| !h))
}

/// Hierarchy flag of every history up to `depth`, keyed by path.
pub fn brute_flags(g: &GameGraph, depth: usize) -> HashMap<Vec<usize>, bool> {
    let mut out = HashMap::new();
    for len in 0..=depth {
        let layer = Layer::new(g, len);
        let h = layer.hierarchical(g.players());
        for (p, f) in layer.paths.into_iter().zip(h) {
            out.insert(p, f);
        }
    }
    out
}

/// Longest run of consecutive non-hierarchical rounds closed by a hierarchical round, over
/// histories of length ≤ depth; and the longest trailing run at exactly `depth`.
pub fn brute_runs(g: &GameGraph, depth: usize) -> (usize, usize) {
    let flags = brute_flags(g, depth);
    let mut closed = 0;
    let mut trailing = 0;
    for (p, _) in flags.iter().filter(|(p, _)| p.len() == depth + 1) {
        let mut run = 0;
        for k in 1..=p.len() {
            if flags[&p[..k]] {
                closed = closed.max(run);
                run = 0;
            } else {
                run += 1;
            }
        }
        trailing = trailing.max(run);
    }
    (closed, trailing)
}
