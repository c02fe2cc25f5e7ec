use std::collections::{BTreeSet, HashMap, VecDeque};

use hgame_core::{GameBuilder, GameGraph, MooreMachine, StrategyProfile};

use crate::crossfree::make_cross_free;
use crate::error::{Result, TransformError};
use crate::signals::annotate_ranks;

pub const LOSE: &str = "LOSE";
pub const SINK: &str = "⊖";

/// Shadow game of a game with dynamic hierarchical information. Shadow player j plays and
/// observes for whichever actual player has rank j at the current position; its observations
/// are tagged `"i:b"` with the actual player i.
#[derive(Clone, Debug)]
pub struct ShadowGame {
    pub game: GameGraph,
    /// Position of the input game, or `None` for intermediaries and the sink.
    pub origin: Vec<Option<usize>>,
    pub intermediary: Vec<bool>,
    /// `rank[p][i]`, 1-based, of actual player i at p.
    pub rank: Vec<Vec<usize>>,
    pub sink: usize,
}

pub fn shadow_game(g: &GameGraph) -> Result<ShadowGame> {
    let a1 = annotate_ranks(g)?;
    let cf = make_cross_free(&a1)?;
    let a2 = annotate_ranks(&cf.game)?;
    let h = &a2.game;
    let n = g.players();
    let mut union: Vec<String> = Vec::new();
    for i in 0..n {
        for a in g.actions(i).names() {
            if !union.contains(a) {
                union.push(a.clone());
            }
        }
    }
    let mut b = GameBuilder::new(n);
    for j in 0..n {
        for a in &union {
            b.action(j, a);
        }
    }
    let mut origin = Vec::new();
    let mut intermediary = Vec::new();
    for p in 0..h.num_positions() {
        let c = a2.origin[p];
        let inter = cf.intermediary[c];
        let obs: Vec<String> = (0..n)
            .map(|j| {
                let i = (0..n).find(|&i| a2.rank[p][i] == j + 1).expect("ranks form a permutation");
                format!("{}:{}", i + 1, h.observations(i).name(h.obs(p, i)))
            })
            .collect();
        b.add_position(h.position_name(p), &obs, Some(h.colors().name(h.color(p))));
        origin.push(if inter { None } else { Some(a1.origin[cf.origin[c]]) });
        intermediary.push(inter);
    }
    let sink = b.add_position(SINK, &vec![SINK; n], Some(LOSE));
    origin.push(None);
    intermediary.push(false);
    b.set_initial(h.initial());
    b.add_move_all(sink, sink);
    let sizes = vec![union.len(); n];
    let ids: Vec<Vec<Option<usize>>> =
        (0..n).map(|i| union.iter().map(|a| h.actions(i).get(a)).collect()).collect();
    for p in 0..h.num_positions() {
        for x in hgame_core::game::all_profiles(&sizes) {
            let a: Option<Vec<usize>> = (0..n).map(|i| ids[i][x[a2.rank[p][i] - 1]]).collect();
            match a {
                Some(a) => {
                    for &t in h.post(p, h.encode_profile(&a)) {
                        b.add_move(p, x.clone(), t);
                    }
                }
                None => b.add_move(p, x, sink),
            }
        }
    }
    let mut rank = a2.rank.clone();
    rank.push((1..=n).collect());
    Ok(ShadowGame { game: b.build()?, origin, intermediary, rank, sink })
}

type Tracked = (usize, Vec<usize>);

/// Turns a profile of the shadow game into one for `g`: player i follows the shadow player of
/// its current rank. Its machine tracks the set of (shadow position, shadow machine states)
/// compatible with its own observations, advancing two shadow steps (through the
/// intermediary) per round.
pub fn redistribute_strategy(sigma: &StrategyProfile, sh: &ShadowGame, g: &GameGraph) -> Result<StrategyProfile> {
    sigma.check(&sh.game)?;
    let s = &sh.game;
    let n = g.players();
    let profile = |ms: &[usize]| -> Vec<usize> { (0..n).map(|j| sigma.machines[j].out[ms[j]]).collect() };
    let step_all = |ms: &[usize], p: usize| -> Vec<usize> {
        (0..n).map(|j| sigma.machines[j].step(ms[j], s.obs(p, j))).collect()
    };
    let mut succ_cache: HashMap<Tracked, Vec<Tracked>> = HashMap::new();
    let mut successors = |t: &Tracked| -> Vec<Tracked> {
        if let Some(r) = succ_cache.get(t) {
            return r.clone();
        }
        let (p, ms) = t;
        let mut out = BTreeSet::new();
        for &u in s.post(*p, s.encode_profile(&profile(ms))) {
            if u == sh.sink {
                continue;
            }
            let mu = step_all(ms, u);
            for &w in s.post(u, s.encode_profile(&profile(&mu))) {
                if w != sh.sink {
                    out.insert((w, step_all(&mu, w)));
                }
            }
        }
        let r: Vec<Tracked> = out.into_iter().collect();
        succ_cache.insert(t.clone(), r.clone());
        r
    };
    let mut machines = Vec::new();
    for i in 0..n {
        let start: Vec<Tracked> = vec![(s.initial(), sigma.machines.iter().map(|m| m.initial).collect())];
        let mut index: HashMap<Vec<Tracked>, usize> = HashMap::new();
        index.insert(start.clone(), 0);
        let mut sets = vec![start];
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let set = sets[k].clone();
            let mut act: Option<usize> = None;
            for (p, ms) in &set {
                let j = sh.rank[*p][i] - 1;
                let name = s.actions(j).name(sigma.machines[j].out[ms[j]]);
                if let Some(a) = g.actions(i).get(name) {
                    match act {
                        Some(b) if b != a => {
                            return Err(TransformError::Inconsistent(format!(
                                "player {} is told both {} and {}",
                                i + 1,
                                g.actions(i).name(b),
                                g.actions(i).name(a)
                            )))
                        }
                        _ => act = Some(a),
                    }
                }
            }
            if out.len() <= k {
                out.resize(k + 1, 0);
                delta.resize(k + 1, Vec::new());
            }
            out[k] = act.unwrap_or(0);
            let mut next: Vec<BTreeSet<Tracked>> = vec![BTreeSet::new(); g.observations(i).len()];
            for t in &set {
                for t2 in successors(t) {
                    let v = sh.origin[t2.0].expect("regular position");
                    next[g.obs(v, i)].insert(t2);
                }
            }
            let mut row = Vec::new();
            for nb in next {
                let key: Vec<Tracked> = nb.into_iter().collect();
                let id = *index.entry(key.clone()).or_insert_with(|| {
                    sets.push(key);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                });
                row.push(id);
            }
            delta[k] = row;
        }
        out.resize(sets.len(), 0);
        delta.resize(sets.len(), Vec::new());
        machines.push(MooreMachine::new(
            g.observations(i).names().to_vec(),
            g.actions(i).names().to_vec(),
            0,
            delta,
            out,
        )?);
    }
    Ok(StrategyProfile { machines })
}
