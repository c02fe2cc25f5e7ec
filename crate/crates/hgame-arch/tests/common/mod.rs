#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use hgame_arch::ArchGame;
use hgame_core::doc::parse_game;
use hgame_core::{GameGraph, MooreMachine, WinningCondition};

pub const GAMES: &[&str] =
    &["solo", "pubcoin", "privbit", "privbit_echo", "fork2", "fork2_choice", "fork2_match", "fork2_perm", "swap"];

pub fn fixture(name: &str) -> GameGraph {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    parse_game(&std::fs::read_to_string(&p).unwrap()).unwrap()
}

pub fn trivial(g: &GameGraph) -> WinningCondition {
    WinningCondition::safety(g.colors().names().to_vec(), &[])
}

pub fn names(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

/// Action-labelled histories: observation names of v0, then (action names, observation names)
/// per move, together with the position reached.
pub type Labelled = Vec<(Vec<String>, Vec<String>)>;

pub fn labelled_histories(g: &GameGraph, depth: usize) -> BTreeSet<(Labelled, Vec<usize>)> {
    let obs = |v: usize| -> Vec<String> { (0..g.players()).map(|i| g.observations(i).name(g.obs(v, i)).to_string()).collect() };
    let mut layer = vec![(vec![(Vec::new(), obs(g.initial()))], vec![g.initial()])];
    let mut all: BTreeSet<(Labelled, Vec<usize>)> = layer.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (h, path) in &layer {
            let v = *path.last().unwrap();
            for m in g.moves().iter().filter(|m| m.from == v) {
                let acts: Vec<String> = m.profile.iter().enumerate().map(|(i, &a)| g.actions(i).name(a).to_string()).collect();
                let mut h2 = h.clone();
                h2.push((acts, obs(m.to)));
                let mut p2 = path.clone();
                p2.push(m.to);
                next.insert((h2, p2));
            }
        }
        all.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    all
}

/// The state of the source monitor behind a position of the game of an architecture.
pub fn base_monitor_state(ag: &ArchGame, source_states: usize, letters: usize, m: usize) -> usize {
    if ag.monitor.num_states() == source_states {
        m
    } else {
        m / (letters + 1)
    }
}

pub fn pass_through(inputs: Vec<String>, outputs: Vec<String>) -> MooreMachine {
    let k = inputs.len();
    let delta = vec![(0..k).collect::<Vec<_>>(); k];
    MooreMachine::new(inputs, outputs, 0, delta, (0..k).collect()).unwrap()
}

/// A random complete game with `n` players. With `chained`, the observation of each player is
/// a function of the previous player's.
pub fn random_game(seed: u64, n: usize, positions: usize, actions: usize, chained: bool) -> GameGraph {
    use hgame_core::GameBuilder;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=positions);
    let mut b = GameBuilder::new(n);
    let mut sizes = Vec::new();
    for i in 0..n {
        let k = rng.gen_range(1..=actions);
        for a in 0..k {
            b.action(i, &format!("a{a}"));
        }
        sizes.push(k);
    }
    for v in 0..nv {
        let mut obs: Vec<String> = Vec::new();
        let mut c = rng.gen_range(0..4usize);
        for _ in 0..n {
            if !chained {
                c = rng.gen_range(0..3);
            }
            obs.push(format!("o{c}"));
            c /= 2;
        }
        b.add_position(&format!("v{v}"), &obs, None);
    }
    b.set_initial(0);
    let profiles = hgame_core::game::all_profiles(&sizes);
    for v in 0..nv {
        for p in &profiles {
            b.add_move(v, p.clone(), rng.gen_range(0..nv));
            if rng.gen_bool(0.3) {
                b.add_move(v, p.clone(), rng.gen_range(0..nv));
            }
        }
    }
    b.build().unwrap()
}
