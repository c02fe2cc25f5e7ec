use std::path::Path;

use hgame_arch::doc::{render_architecture, render_monitor, Architecture};
use hgame_arch::translate::max_branching;
use hgame_arch::wiring::{add_feedback_links, wired_architecture};
use hgame_arch::{
    arch_to_game, arch_to_game_reachable, build_router, check_round_trip, game_to_arch, sequentialize_pipeline, HardWired,
    MonitoredArchitecture, SignalAlphabet,
};
use hgame_core::doc::{render_game, render_spec};
use hgame_core::{GameGraph, WinningCondition};
use hgame_hierarchy::{check_static, StaticResult};

use crate::report::{write_atomic, Caps, Failure, Outcome, Result, Verdict};

fn wrote(out: Outcome, path: Option<&Path>, text: impl FnOnce() -> String) -> Result<Outcome> {
    match path {
        Some(p) => {
            write_atomic(p, &text())?;
            Ok(out.artifact(p))
        }
        None => Ok(out),
    }
}

fn monitored(a: Architecture, caps: Caps) -> Result<(MonitoredArchitecture, bool)> {
    Ok(match a {
        Architecture::Monitored(m) => (m, false),
        Architecture::Routed(r) => (build_router(&r, caps.max_states)?.architecture(), true),
    })
}

pub fn arch2game(
    a: Architecture,
    spec: Option<WinningCondition>,
    caps: Caps,
    reachable: bool,
    out: &Path,
    spec_out: Option<&Path>,
) -> Result<Outcome> {
    let (arch, routed) = monitored(a, caps)?;
    let spec = spec.unwrap_or_else(|| WinningCondition::safety(arch.monitor.states.clone(), &[]));
    let ag = if reachable {
        arch_to_game_reachable(&arch, &spec, caps.max_states)?
    } else {
        arch_to_game(&arch, &spec, caps.max_states)?
    };
    write_atomic(out, &render_game(&ag.game))?;
    let sink = ag.origin.iter().any(|o| o.is_none());
    let res = Outcome::new(Verdict::Ok, format!("game with {} positions", ag.game.num_positions()))
        .detail("players", ag.game.players())
        .detail("routed", routed)
        .detail("losing_sink", sink)
        .artifact(out)
        .stat("positions", ag.game.num_positions())
        .stat("moves", ag.game.moves().len())
        .stat("monitor_states", ag.monitor.num_states());
    wrote(res, spec_out, || render_spec(&ag.condition))
}

pub fn game2arch(g: &GameGraph, w: &WinningCondition, caps: Caps, depth: usize, out: &Path, spec_out: Option<&Path>) -> Result<Outcome> {
    if depth > caps.max_depth {
        return Err(Failure { message: format!("round-trip depth {depth} exceeds --max-depth {}", caps.max_depth), cap: true });
    }
    let (arch, spec) = game_to_arch(g, w)?;
    write_atomic(out, &render_architecture(&arch))?;
    let rt = check_round_trip(g, w, depth, caps.max_states)?;
    let (verdict, summary) = if rt.is_bijection() {
        (Verdict::Ok, format!("round trip is a bijection on {} histories up to depth {depth}", rt.histories))
    } else {
        (Verdict::Fail, format!("round trip differs on {} histories up to depth {depth}", rt.mismatched.max(1)))
    };
    let res = Outcome::new(verdict, summary)
        .detail("processes", arch.players())
        .detail("directions", max_branching(g))
        .detail("monitor_states", arch.monitor.num_states())
        .detail("round_trip", serde_json::json!({
            "depth": rt.depth,
            "histories": rt.histories,
            "translated": rt.translated,
            "mismatched": rt.mismatched,
            "bijection": rt.is_bijection(),
        }))
        .artifact(out);
    wrote(res, spec_out, || render_spec(&spec))
}

pub fn pipeline(n: usize, signals: &[String], feedback: bool, architecture: bool, out: &Path) -> Result<Outcome> {
    if n == 0 {
        return Err(Failure::new("a pipeline needs at least one process"));
    }
    let stage = SignalAlphabet::signals(signals.to_vec());
    let w = HardWired::pipeline(vec![stage; n + 1])?;
    let mut arch = wired_architecture(&w);
    if feedback {
        arch = add_feedback_links(&arch)?;
    }
    let m = &arch.monitor;
    let text = if architecture { render_architecture(&arch) } else { render_monitor(m) };
    write_atomic(out, &text)?;
    let links = arch.wiring.as_ref().map_or(0, |w| w.links.len());
    Ok(Outcome::new(Verdict::Ok, format!("{n}-process pipeline, monitor with {} state(s)", m.num_states()))
        .detail("processes", n)
        .detail("monitor_states", m.num_states())
        .detail("links", links)
        .artifact(out))
}

pub fn router(a: Architecture, caps: Caps, out: Option<&Path>) -> Result<Outcome> {
    let r = match a {
        Architecture::Routed(r) => r,
        Architecture::Monitored(_) => return Err(Failure::new("expected an architecture with a router block")),
    };
    let router = build_router(&r, caps.max_states)?;
    let word = router.panic_word();
    let m = &router.monitor;
    let summary = match &word {
        Some(w) => format!("panic reachable after {} round(s)", w.len()),
        None => "router never panics".into(),
    };
    let res = Outcome::new(Verdict::Ok, summary)
        .detail("panic_reachable", word.is_some())
        .detail("panic_word", word.as_ref().map(|w| w.iter().map(|&c| m.letter_name(c)).collect::<Vec<_>>()))
        .detail("panic_deliveries", word.as_ref().map(|w| router.deliveries(w)))
        .stat("monitor_states", m.num_states())
        .stat("candidate_positions", router.candidates.num_positions());
    wrote(res, out, || render_architecture(&router.architecture()))
}

pub fn sequentialize(
    g: &GameGraph,
    w: &WinningCondition,
    order: Option<Vec<usize>>,
    caps: Caps,
    out: &Path,
    spec_out: Option<&Path>,
) -> Result<Outcome> {
    let order = match order {
        Some(o) => {
            if o.iter().any(|&i| i == 0 || i > g.players()) {
                return Err(Failure::new(format!("order {o:?} names a player outside 1..={}", g.players())));
            }
            o.into_iter().map(|i| i - 1).collect()
        }
        None => match check_static(g) {
            StaticResult::Ordered(o) => o,
            StaticResult::Refuted(rs) => {
                return Err(Failure::new(format!("no static order: players {} and {} are incomparable", rs[0].i + 1, rs[0].j + 1)))
            }
        },
    };
    let s = sequentialize_pipeline(g, &order, w, caps.max_states)?;
    write_atomic(out, &render_architecture(&s.pipeline))?;
    let states: Vec<usize> = s.pipeline.processes.iter().map(|p| p.num_states()).collect();
    let res = Outcome::new(Verdict::Ok, format!("pipeline with specification of {} states", s.spec.automaton.state_names.len()))
        .detail("order", order.iter().map(|i| i + 1).collect::<Vec<_>>())
        .detail("process_states", states)
        .detail("spec_states", s.spec.automaton.state_names.len())
        .artifact(out);
    wrote(res, spec_out, || render_spec(&s.spec))
}
