use std::collections::BTreeMap;
use std::path::Path;

use hgame_core::doc::{render_game, render_spec};
use hgame_core::{GameGraph, WinningCondition};
use hgame_hierarchy::{check_static, StaticResult};
use hgame_transforms::{annotate_ranks, make_cross_free, restrict_to_hierarchical, shadow_game, to_hierarchical_observation};

use crate::report::{write_atomic, Caps, Failure, Outcome, Result, Verdict};
use crate::TransformKind;

fn intermediaries(g: &GameGraph, flags: &[bool]) -> Vec<String> {
    (0..g.num_positions()).filter(|&v| flags[v]).map(|v| g.position_name(v).to_string()).collect()
}

pub fn run(kind: TransformKind, g: &GameGraph, w: &WinningCondition, caps: Caps, out: &Path, spec_out: Option<&Path>) -> Result<Outcome> {
    let mut result = Outcome::new(Verdict::Ok, String::new());
    let (h, name) = match kind {
        TransformKind::Hierobs => {
            let order = match check_static(g) {
                StaticResult::Ordered(o) => o,
                StaticResult::Refuted(rs) => {
                    return Err(Failure::new(format!(
                        "no static order: players {} and {} are incomparable",
                        rs[0].i + 1,
                        rs[0].j + 1
                    )))
                }
            };
            result = result.detail("order", order.iter().map(|i| i + 1).collect::<Vec<_>>());
            (to_hierarchical_observation(g, &order)?, "hierarchical observation")
        }
        TransformKind::Shadow => {
            let sh = shadow_game(g)?;
            let rank: BTreeMap<String, Vec<usize>> =
                (0..sh.game.num_positions()).map(|v| (sh.game.position_name(v).to_string(), sh.rank[v].clone())).collect();
            result = result
                .detail("intermediaries", intermediaries(&sh.game, &sh.intermediary))
                .detail("rank", rank)
                .detail("sink", sh.game.position_name(sh.sink));
            (sh.game, "shadow game")
        }
        TransformKind::Crossfree => {
            let cf = make_cross_free(&annotate_ranks(g)?)?;
            result = result.detail("intermediaries", intermediaries(&cf.game, &cf.intermediary));
            (cf.game, "cross-free game")
        }
        TransformKind::Restrict => {
            let r = restrict_to_hierarchical(g, w, caps.max_states)?;
            result = result.detail("sink", r.sink.map(|s| r.game.position_name(s).to_string()));
            if let Some(p) = spec_out {
                write_atomic(p, &render_spec(&r.condition))?;
                result = result.artifact(p);
            }
            (r.game, "restriction to hierarchical histories")
        }
    };
    write_atomic(out, &render_game(&h))?;
    let delta = h.num_positions() as i64 - g.num_positions() as i64;
    result.summary = format!("{name}: {} -> {} positions", g.num_positions(), h.num_positions());
    Ok(result
        .detail("transformation", name)
        .artifact(out)
        .stat("positions_in", g.num_positions())
        .stat("positions_out", h.num_positions())
        .stat("positions_delta", delta)
        .stat("moves_in", g.moves().len())
        .stat("moves_out", h.moves().len()))
}
