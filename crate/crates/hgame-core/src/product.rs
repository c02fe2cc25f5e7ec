use std::collections::HashMap;

use crate::error::{CoreError, Result};
use crate::game::{GameBuilder, GameGraph};
use crate::machine::MooreMachine;

/// A Moore machine reading positions, optionally exposed to one player as an extra
/// observation component.
#[derive(Clone, Debug)]
pub struct Signal {
    pub machine: MooreMachine,
    pub expose: Option<usize>,
}

/// Result of a synchronised product: the game plus, per product position, its origin in `g`
/// and the machine states.
#[derive(Clone, Debug)]
pub struct SignalProduct {
    pub game: GameGraph,
    pub origin: Vec<usize>,
    pub states: Vec<Vec<usize>>,
}

/// Synchronises `g` with position-reading signals: positions (v, m1, …, mk) reachable from
/// (v0, m0…), moves ((v,m), a, (v', μ(m, v'))), and exposed outputs appended to observations.
pub fn product_with_signals(g: &GameGraph, signals: &[Signal]) -> Result<SignalProduct> {
    for s in signals {
        if s.machine.num_inputs() != g.num_positions() {
            return Err(CoreError::AlphabetMismatch(format!(
                "signal reads {} letters but the game has {} positions",
                s.machine.num_inputs(),
                g.num_positions()
            )));
        }
        if let Some(i) = s.expose {
            if i >= g.players() {
                return Err(CoreError::AlphabetMismatch(format!("no player {}", i + 1)));
            }
        }
    }
    let n = g.players();
    let mut b = GameBuilder::new(n);
    for i in 0..n {
        for a in g.actions(i).names() {
            b.action(i, a);
        }
    }
    let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut origin = Vec::new();
    let mut states = Vec::new();
    let add = |b: &mut GameBuilder,
                   index: &mut HashMap<(usize, Vec<usize>), usize>,
                   origin: &mut Vec<usize>,
                   states: &mut Vec<Vec<usize>>,
                   v: usize,
                   ms: Vec<usize>|
     -> (usize, bool) {
        if let Some(&id) = index.get(&(v, ms.clone())) {
            return (id, false);
        }
        let mut name = g.position_name(v).to_string();
        for m in &ms {
            name.push_str(&format!("|{m}"));
        }
        let obs: Vec<String> = (0..n)
            .map(|i| {
                let mut o = g.observations(i).name(g.obs(v, i)).to_string();
                for (s, &m) in signals.iter().zip(&ms) {
                    if s.expose == Some(i) {
                        o.push('+');
                        o.push_str(&s.machine.output_names[s.machine.out[m]]);
                    }
                }
                o
            })
            .collect();
        let id = b.add_position(&name, &obs, Some(g.colors().name(g.color(v))));
        index.insert((v, ms.clone()), id);
        origin.push(v);
        states.push(ms);
        (id, true)
    };
    let m0: Vec<usize> = signals.iter().map(|s| s.machine.initial).collect();
    let (s0, _) = add(&mut b, &mut index, &mut origin, &mut states, g.initial(), m0);
    b.set_initial(s0);
    let mut k = 0;
    while k < origin.len() {
        let v = origin[k];
        let ms = states[k].clone();
        for mv in g.moves().iter().filter(|m| m.from == v) {
            let next: Vec<usize> = signals.iter().zip(&ms).map(|(s, &m)| s.machine.step(m, mv.to)).collect();
            let (t, _) = add(&mut b, &mut index, &mut origin, &mut states, mv.to, next);
            b.add_move(k, mv.profile.clone(), t);
        }
        k += 1;
    }
    Ok(SignalProduct { game: b.build()?, origin, states })
}

/// Product with a single machine; see [`product_with_signals`].
pub fn product_with_moore(g: &GameGraph, m: &MooreMachine, expose: Option<usize>) -> Result<GameGraph> {
    Ok(product_with_signals(g, &[Signal { machine: m.clone(), expose }])?.game)
}
