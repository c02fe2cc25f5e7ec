use std::collections::BTreeSet;

use hgame_core::{GameBuilder, GameGraph};

use crate::error::Result;
use crate::signals::RankAnnotatedGame;

pub const SKIP: &str = "SKIP";

/// Game with one intermediary position on every edge (v, w) of the annotated game.
#[derive(Clone, Debug)]
pub struct CrossFreeGame {
    pub game: GameGraph,
    /// For regular positions the annotated position they copy; for intermediaries the target.
    pub origin: Vec<usize>,
    pub intermediary: Vec<bool>,
}

fn set_name(sets: &BTreeSet<Vec<String>>) -> String {
    let parts: Vec<String> = sets.iter().map(|s| format!("{{{}}}", s.join(","))).collect();
    format!("~{}", parts.join(""))
}

/// Inserts an intermediary u between every v and w. At u each player i observes
/// {λ^i_j(w) : j ≠ i, i ⪯_w j}, i.e. what the less-informed players know about its next
/// observation. Intermediaries have the single successor w and colour SKIP.
pub fn make_cross_free(ann: &RankAnnotatedGame) -> Result<CrossFreeGame> {
    let g = &ann.game;
    let n = g.players();
    let mut b = GameBuilder::new(n);
    for i in 0..n {
        for a in g.actions(i).names() {
            b.action(i, a);
        }
    }
    let mut origin = Vec::new();
    let mut intermediary = Vec::new();
    for v in 0..g.num_positions() {
        let obs: Vec<&str> = (0..n).map(|i| g.observations(i).name(g.obs(v, i))).collect();
        b.add_position(g.position_name(v), &obs, Some(g.colors().name(g.color(v))));
        origin.push(v);
        intermediary.push(false);
    }
    b.set_initial(g.initial());
    for v in 0..g.num_positions() {
        for &w in g.successors(v) {
            let obs: Vec<String> = (0..n)
                .map(|i| {
                    let sets: BTreeSet<Vec<String>> =
                        (0..n).filter(|&j| j != i && ann.below[w][i][j]).map(|j| ann.lambda[w][i][j].clone()).collect();
                    set_name(&sets)
                })
                .collect();
            let u = b.add_position(&format!("{}>{}", g.position_name(v), g.position_name(w)), &obs, Some(SKIP));
            origin.push(w);
            intermediary.push(true);
            b.add_move_all(u, w);
            for m in g.moves().iter().filter(|m| m.from == v && m.to == w) {
                b.add_move(v, m.profile.clone(), u);
            }
        }
    }
    Ok(CrossFreeGame { game: b.build()?, origin, intermediary })
}

/// Players i, j cross after history π·w if P^i ⊊ P^j at π and P^j ⊊ P^i at π·w. Checks all
/// histories up to `depth` by brute force over information sets; returns a crossing history.
pub fn find_crossing(g: &GameGraph, depth: usize) -> Option<(usize, usize, Vec<usize>)> {
    let hs = hgame_core::enumerate_histories(g, depth, 1_000_000).ok()?;
    let n = g.players();
    let mut by_len: Vec<Vec<&[usize]>> = vec![Vec::new(); depth + 1];
    for h in &hs {
        by_len[h.len()].push(&h.path);
    }
    let strict = |p: &[usize], i: usize, j: usize| -> bool {
        // P^i(p) ⊊ P^j(p)
        let layer = &by_len[p.len() - 1];
        let wi = g.obs_word(p, i);
        let wj = g.obs_word(p, j);
        let sub = layer.iter().filter(|q| g.obs_word(q, i) == wi).all(|q| g.obs_word(q, j) == wj);
        let eq = layer.iter().filter(|q| g.obs_word(q, j) == wj).all(|q| g.obs_word(q, i) == wi);
        sub && !eq
    };
    for h in hs.iter().filter(|h| h.len() >= 1) {
        let p = &h.path;
        let prev = &p[..p.len() - 1];
        for i in 0..n {
            for j in 0..n {
                if i != j && strict(prev, i, j) && strict(p, j, i) {
                    return Some((i, j, p.clone()));
                }
            }
        }
    }
    None
}
