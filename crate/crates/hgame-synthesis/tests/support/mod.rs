#![allow(dead_code)]

use std::collections::BTreeSet;

use hgame_core::{GameBuilder, GameGraph, MooreMachine, StrategyProfile, WinningCondition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ok_bad() -> Vec<String> {
    vec!["ok".into(), "bad".into()]
}

pub fn never_bad() -> WinningCondition {
    WinningCondition::safety(ok_bad(), &[1])
}

pub fn uniform(g: &GameGraph) -> GameGraph {
    g.with_colors(&vec!["ok".to_string(); g.num_positions()]).unwrap()
}

/// Recolours positions ok/bad at random and prefixes every observation with the colour, so
/// that observations refine the colouring.
pub fn colour_refined(g: &GameGraph, seed: u64, p_bad: f64) -> GameGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GameBuilder::new(g.players());
    for i in 0..g.players() {
        for a in g.actions(i).names() {
            b.action(i, a);
        }
    }
    for v in 0..g.num_positions() {
        let c = if v != g.initial() && rng.gen_bool(p_bad) { "bad" } else { "ok" };
        let obs: Vec<String> = (0..g.players()).map(|i| format!("{c}{}", g.observations(i).name(g.obs(v, i)))).collect();
        b.add_position(g.position_name(v), &obs, Some(c));
    }
    b.set_initial(g.initial());
    for m in g.moves() {
        b.add_move(m.from, m.profile.clone(), m.to);
    }
    b.build().unwrap()
}

/// Every Moore machine with 1..=k states and initial state 0.
pub fn all_machines(inputs: &[String], outputs: &[String], k: usize) -> Vec<MooreMachine> {
    let mut out = Vec::new();
    for s in 1..=k {
        let slots = s * inputs.len();
        let nd = s.pow(slots as u32);
        let no = outputs.len().pow(s as u32);
        for d in 0..nd {
            let mut x = d;
            let mut delta = vec![vec![0; inputs.len()]; s];
            for row in delta.iter_mut() {
                for t in row.iter_mut() {
                    *t = x % s;
                    x /= s;
                }
            }
            for o in 0..no {
                let mut y = o;
                let outs: Vec<usize> = (0..s)
                    .map(|_| {
                        let a = y % outputs.len();
                        y /= outputs.len();
                        a
                    })
                    .collect();
                out.push(MooreMachine::new(inputs.to_vec(), outputs.to_vec(), 0, delta.clone(), outs).unwrap());
            }
        }
    }
    out
}

pub fn all_profiles(g: &GameGraph, k: usize) -> Vec<StrategyProfile> {
    let per: Vec<Vec<MooreMachine>> = (0..g.players())
        .map(|i| all_machines(g.observations(i).names(), g.actions(i).names(), k))
        .collect();
    let sizes: Vec<usize> = per.iter().map(|p| p.len()).collect();
    hgame_core::game::all_profiles(&sizes)
        .into_iter()
        .map(|c| StrategyProfile { machines: c.iter().enumerate().map(|(i, &x)| per[i][x].clone()).collect() })
        .collect()
}

/// No outcome history with at most `depth` moves visits a colour in `bad`.
pub fn safe_to_depth(g: &GameGraph, s: &StrategyProfile, bad: &[&str], depth: usize) -> bool {
    let is_bad = |v: usize| bad.contains(&g.colors().name(g.color(v)));
    if is_bad(g.initial()) {
        return false;
    }
    let n = g.players();
    let mut layer: BTreeSet<(usize, Vec<usize>)> =
        BTreeSet::from([(g.initial(), s.machines.iter().map(|m| m.initial).collect())]);
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (v, ms) in &layer {
            let p: Vec<usize> = (0..n).map(|i| s.machines[i].out[ms[i]]).collect();
            for &w in g.post(*v, g.encode_profile(&p)) {
                if is_bad(w) {
                    return false;
                }
                next.insert((w, (0..n).map(|i| s.machines[i].step(ms[i], g.obs(w, i))).collect()));
            }
        }
        layer = next;
    }
    true
}

/// Actions prescribed along every outcome history with at most `depth` moves.
pub fn behaviour(g: &GameGraph, s: &StrategyProfile, depth: usize) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![vec![g.initial()]];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for h in frontier {
            let p = s.profile_at(g, &h);
            for &w in g.post(*h.last().unwrap(), g.encode_profile(&p)) {
                let mut h2 = h.clone();
                h2.push(w);
                next.push(h2);
            }
            out.insert((h, p));
        }
        frontier = next;
    }
    out
}

#[derive(Clone)]
struct Partial {
    delta: Vec<Vec<Vec<Option<usize>>>>,
    out: Vec<Vec<Option<usize>>>,
}

enum Need {
    Out(usize, usize),
    Delta(usize, usize, usize),
}

/// Some profile of machines with at most `k` states that stays out of `bad` for `depth`
/// moves. Exhaustive: machine entries are fixed, in every possible way, when an outcome
/// first reads them; entries never read are irrelevant below that depth.
pub fn safe_profile_search(g: &GameGraph, bad: &[&str], k: usize, depth: usize) -> Option<StrategyProfile> {
    let n = g.players();
    let p = Partial {
        delta: (0..n).map(|i| vec![vec![None; g.observations(i).len()]; k]).collect(),
        out: vec![vec![None; k]; n],
    };
    let found = search(g, bad, k, depth, p)?;
    let machines = (0..n)
        .map(|i| {
            MooreMachine::new(
                g.observations(i).names().to_vec(),
                g.actions(i).names().to_vec(),
                0,
                found.delta[i].iter().map(|r| r.iter().map(|t| t.unwrap_or(0)).collect()).collect(),
                found.out[i].iter().map(|o| o.unwrap_or(0)).collect(),
            )
            .unwrap()
        })
        .collect();
    Some(StrategyProfile { machines })
}

fn search(g: &GameGraph, bad: &[&str], k: usize, depth: usize, p: Partial) -> Option<Partial> {
    let is_bad = |v: usize| bad.contains(&g.colors().name(g.color(v)));
    if is_bad(g.initial()) {
        return None;
    }
    let n = g.players();
    let need = 'walk: {
        let mut layer: BTreeSet<(usize, Vec<usize>)> = BTreeSet::from([(g.initial(), vec![0; n])]);
        for _ in 0..depth {
            let mut next = BTreeSet::new();
            for (v, ms) in &layer {
                let mut prof = Vec::with_capacity(n);
                for i in 0..n {
                    match p.out[i][ms[i]] {
                        Some(a) => prof.push(a),
                        None => break 'walk Need::Out(i, ms[i]),
                    }
                }
                for &w in g.post(*v, g.encode_profile(&prof)) {
                    if is_bad(w) {
                        return None;
                    }
                    let mut ms2 = Vec::with_capacity(n);
                    for i in 0..n {
                        match p.delta[i][ms[i]][g.obs(w, i)] {
                            Some(t) => ms2.push(t),
                            None => break 'walk Need::Delta(i, ms[i], g.obs(w, i)),
                        }
                    }
                    next.insert((w, ms2));
                }
            }
            layer = next;
        }
        return Some(p);
    };
    match need {
        Need::Out(i, m) => (0..g.actions(i).len()).find_map(|a| {
            let mut q = p.clone();
            q.out[i][m] = Some(a);
            search(g, bad, k, depth, q)
        }),
        Need::Delta(i, m, b) => (0..k).find_map(|t| {
            let mut q = p.clone();
            q.delta[i][m][b] = Some(t);
            search(g, bad, k, depth, q)
        }),
    }
}
