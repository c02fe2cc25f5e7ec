use std::path::Path;

use hgame_core::doc::render_profile;
use hgame_core::{GameGraph, StrategyProfile, WinningCondition};
use hgame_synthesis::{synthesize, synthesize_hierarchical, verify_strategy, Config, Outcome as Synth};

use crate::check::{lasso_witness, with_witness};
use crate::report::{write_atomic, Caps, Failure, Outcome, Result, Verdict};

pub fn config(caps: Caps, max_priorities: usize) -> Config {
    Config { max_arena: caps.max_arena, max_states: caps.max_states, max_priorities, ..Config::default() }
}

pub fn run(g: &GameGraph, w: &WinningCondition, cfg: &Config, hierarchical: bool, out: &Path) -> Result<Outcome> {
    let res = if hierarchical { synthesize_hierarchical(g, w, cfg)? } else { synthesize(g, w, cfg)? };
    let stats = |o: Outcome| o.stat("classes", res.stats.classes).stat("arena_vertices", res.stats.arena_vertices);
    match &res.outcome {
        Synth::Unrealizable => Ok(stats(Outcome::new(Verdict::Unrealizable, "no distributed winning strategy"))),
        Synth::Realizable(s) => {
            if let Some(l) = verify_strategy(g, s, w, cfg.max_states)? {
                let len = l.prefix.len() + l.cycle.len();
                return Err(Failure::new(format!("synthesized profile fails verification on a play of length {len}")));
            }
            write_atomic(out, &render_profile(s))?;
            let sizes: Vec<usize> = s.machines.iter().map(|m| m.num_states()).collect();
            Ok(stats(Outcome::new(Verdict::Realizable, format!("profile with machine sizes {sizes:?}, verified")))
                .detail("machine_states", sizes)
                .detail("verified", true)
                .artifact(out))
        }
    }
}

pub fn verify(g: &GameGraph, s: &StrategyProfile, w: &WinningCondition, caps: Caps, witness: Option<&Path>) -> Result<Outcome> {
    match verify_strategy(g, s, w, caps.max_states)? {
        None => Ok(Outcome::new(Verdict::Ok, "every outcome satisfies the condition")),
        Some(l) => {
            let out = Outcome::new(Verdict::Fail, format!("losing outcome with a cycle of {}", l.cycle.len()));
            let lasso = hgame_hierarchy::LassoWitness { prefix: l.prefix, cycle: l.cycle };
            with_witness(out, &lasso_witness(g, "verify", &lasso), witness)
        }
    }
}
