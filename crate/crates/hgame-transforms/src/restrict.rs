use std::collections::HashMap;

use hgame_core::condition::ColorMap;
use hgame_core::{CoreError, GameBuilder, GameGraph, WinningCondition};
use hgame_hierarchy::non_hierarchy_product;

use crate::crossfree::SKIP;
use crate::error::Result;
use crate::shadow::{LOSE, SINK};

/// Reads `w` over the colours of a derived game: SKIP stutters, LOSE is rejecting and
/// absorbing, every other colour must be one of the condition's letters.
pub fn lift_condition(w: &WinningCondition, g: &GameGraph) -> Result<WinningCondition> {
    let map: Vec<ColorMap> = g
        .colors()
        .names()
        .iter()
        .map(|c| match c.as_str() {
            SKIP => Ok(ColorMap::Stutter),
            LOSE => Ok(ColorMap::Lose),
            _ => w.colors().iter().position(|x| x == c).map(ColorMap::Letter).ok_or_else(|| {
                CoreError::AlphabetMismatch(format!("colour `{c}` is not read by the condition"))
            }),
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(w.pullback(g.colors().names().to_vec(), &map))
}

#[derive(Clone, Debug)]
pub struct Restricted {
    pub game: GameGraph,
    pub condition: WinningCondition,
    /// Position of the input game, `None` for the sink.
    pub origin: Vec<Option<usize>>,
    pub sink: Option<usize>,
}

/// Product with the deterministic non-hierarchy automaton in which every move that would
/// create a non-hierarchical history goes to a sink with a fresh observation for all players
/// and colour LOSE. The condition additionally rejects every play reaching the sink.
pub fn restrict_to_hierarchical(g: &GameGraph, w: &WinningCondition, cap: usize) -> Result<Restricted> {
    let d = non_hierarchy_product(g).determinize_capped(cap)?;
    let n = g.players();
    let mut b = GameBuilder::new(n);
    for i in 0..n {
        for a in g.actions(i).names() {
            b.action(i, a);
        }
    }
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize, usize)> = Vec::new();
    let mut sink = None;
    let add = |b: &mut GameBuilder, index: &mut HashMap<(usize, usize), usize>, keys: &mut Vec<(usize, usize, usize)>, v: usize, q: usize| {
        *index.entry((v, q)).or_insert_with(|| {
            let obs: Vec<&str> = (0..n).map(|i| g.observations(i).name(g.obs(v, i))).collect();
            let id = b.add_position(&format!("{}|{}", g.position_name(v), q), &obs, Some(g.colors().name(g.color(v))));
            keys.push((v, q, id));
            id
        })
    };
    let q0 = d.next(d.initial.expect("initial"), g.initial());
    let s0 = add(&mut b, &mut index, &mut keys, g.initial(), q0);
    b.set_initial(s0);
    let mut k = 0;
    while k < keys.len() {
        let (v, q, id) = keys[k];
        for m in g.moves().iter().filter(|m| m.from == v) {
            let q2 = d.next(q, m.to);
            let t = if d.accepting[q2] {
                *sink.get_or_insert_with(|| {
                    let s = b.add_position(SINK, &vec![SINK; n], Some(LOSE));
                    b.add_move_all(s, s);
                    s
                })
            } else {
                add(&mut b, &mut index, &mut keys, m.to, q2)
            };
            b.add_move(id, m.profile.clone(), t);
        }
        k += 1;
    }
    let game = b.build()?;
    let mut origin: Vec<Option<usize>> = vec![None; game.num_positions()];
    for &(v, _, id) in &keys {
        origin[id] = Some(v);
    }
    let condition = lift_condition(w, &game)?;
    Ok(Restricted { game, condition, origin, sink })
}
