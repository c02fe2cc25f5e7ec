//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#[path = "../../hgame-arch/tests/common/mod.rs"]
mod arch_common;
#[path = "../../hgame-hierarchy/tests/common/mod.rs"]
mod common;
#[path = "../../hgame-synthesis/tests/support/mod.rs"]
mod support;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_dynamic, brute_flags, brute_runs, brute_static, fixture_dir, fixture_games, random_game, Shape, SMALL};
use hgame_arch::translate::condition_over_positions;
use hgame_arch::wiring::{add_feedback_links, lift_programs, wired_architecture};
use hgame_arch::{arch_to_game_reachable, game_to_arch, sequentialize_pipeline, HardWired, SignalAlphabet};
use hgame_core::game::enumerate_histories;
use hgame_core::{GameGraph, Mode, MooreMachine, WinningCondition, WordAutomaton};
use hgame_hierarchy::*;
use hgame_synthesis::{
    check_preconditions, non_hierarchical_outcome, synthesize, synthesize_hierarchical, verify_strategy, Config, SynthesisError,
};
use hgame_transforms::{
    annotate_ranks, hierarchical_observation_product, make_cross_free, restrict_to_hierarchical, shadow_game,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 1_000_000;
const TINY: Shape = Shape { players: (2, 2), positions: 4, actions: 2, observations: 2, out_degree: 2 };

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// 2n²|V|²
fn nfa_bound(g: &GameGraph) -> usize {
    2 * g.players() * g.players() * g.num_positions() * g.num_positions()
}

fn bound_holds(g: &GameGraph) -> bool {
    non_hierarchy_nfa(g).num_states() <= nfa_bound(g)
}

fn total(below: &[Vec<bool>]) -> bool {
    (0..below.len()).all(|i| (0..below.len()).all(|j| below[i][j] || below[j][i]))
}

fn c1_deciders() -> Verdict {
    let start = Instant::now();
    let mut games = 0;
    for seed in 0..1000u64 {
        let g = random_game(seed, SMALL);
        let below = brute_static(&g, 8);
        ensure!(information_preorder(&g) == below, "seed {seed}: information preorder differs");
        ensure!(check_static(&g).is_ok() == total(&below), "seed {seed}: static verdict differs");
        let brute = brute_dynamic(&g, 8);
        match check_dynamic(&g) {
            Ok(()) => ensure!(brute.is_none(), "seed {seed}: dynamic ok, brute force finds round {brute:?}"),
            Err(w) => {
                ensure!(w.is_valid(&g), "seed {seed}: invalid witness");
                ensure!(brute == Some(w.round()), "seed {seed}: round {} vs {brute:?}", w.round());
            }
        }
        games += 1;
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(300), "took {t:?}");
    Ok(format!("{games} games agree at depth 8 in {:.1}s", t.as_secs_f64()))
}

/// Every prefix of τρρ… with at least |τ| positions and at most `depth` moves is
/// non-hierarchical by brute force.
fn lasso_is_gap_infinite(g: &GameGraph, w: &LassoWitness, depth: usize) -> bool {
    let flags = brute_flags(g, depth);
    let mut path = w.prefix.clone();
    while path.len() <= depth + 1 {
        path.extend_from_slice(&w.cycle);
    }
    (w.prefix.len()..=depth + 1).all(|k| !flags[&path[..k]])
}

fn c2_recurring() -> Verdict {
    let mut lassos = 0;
    const GAMES: u64 = 1000;
    for seed in 0..GAMES {
        let g = random_game(seed, TINY);
        let mine = check_recurring(&g, CAP).map_err(|e| e.to_string())?;
        let theirs = recurring_buchi(&g, 200_000).map_err(|e| e.to_string())?.find_rejected_lasso();
        ensure!(mine.is_some() == theirs.is_some(), "seed {seed}: decider {} vs Büchi {}", mine.is_some(), theirs.is_some());
        if let Some(w) = &mine {
            ensure!(w.replays(&g), "seed {seed}: witness does not replay");
            ensure!(lasso_is_gap_infinite(&g, w, 8), "seed {seed}: witness has a hierarchical prefix");
            lassos += 1;
        }
    }
    let mut fixtures = 0;
    for (name, g) in fixture_games() {
        let (closed, trailing) = brute_runs(&g, 8);
        match check_recurring(&g, CAP).map_err(|e| e.to_string())? {
            Some(w) => {
                ensure!(w.replays(&g), "{name}: witness does not replay");
                ensure!(lasso_is_gap_infinite(&g, &w, 8), "{name}: witness has a hierarchical prefix");
                ensure!(trailing >= 9usize.saturating_sub(w.prefix.len()), "{name}: brute force sees a shorter gap");
            }
            None => {
                let Gap::Bounded(k) = gap_size(&g, CAP).map_err(|e| e.to_string())? else {
                    return Err(format!("{name}: recurring but gap unbounded"));
                };
                ensure!(closed <= k && trailing <= k, "{name}: brute-force gap exceeds {k}");
            }
        }
        fixtures += 1;
    }
    Ok(format!("{GAMES} random games ({lassos} with lassos) and {fixtures} fixtures agree"))
}

/// Round t = moves + 1 of on-cycle histories, and whether they are hierarchical.
fn on_cycle_rounds(m: usize, depth: usize) -> Result<BTreeMap<usize, bool>, String> {
    let g = gen_prime_family(m).map_err(|e| e.to_string())?;
    let mut out = BTreeMap::new();
    for (p, h) in brute_flags(&g, depth) {
        let l = p.len() - 1;
        if l >= 1 && g.position_name(*p.last().unwrap()).starts_with('c') {
            let e = out.entry(l + 1).or_insert(h);
            ensure!(*e == h, "m={m}: on-cycle histories of round {} disagree", l + 1);
        }
    }
    Ok(out)
}

fn c3_primes() -> Verdict {
    for m in 1..=3 {
        let g = gen_prime_family(m).map_err(|e| e.to_string())?;
        ensure!(check_recurring(&g, CAP).map_err(|e| e.to_string())?.is_none(), "m={m}: not recurring");
        ensure!(check_dynamic(&g).is_err(), "m={m}: dynamic hierarchical");
    }
    let rounds = on_cycle_rounds(2, 14)?;
    for (&t, &h) in &rounds {
        ensure!(h == ((t - 2) % 6 == 0), "m=2: round {t} hierarchical={h}");
    }
    let g = gen_prime_family(2).map_err(|e| e.to_string())?;
    let gap = gap_size(&g, CAP).map_err(|e| e.to_string())?;
    ensure!(gap == Gap::Bounded(5), "m=2: gap {gap:?}");
    ensure!(brute_runs(&g, 14).0 == 5, "m=2: brute-force gap {}", brute_runs(&g, 14).0);
    Ok(format!("m=1..3 recurring, not dynamic; m=2 pattern holds on rounds 2..={}, gap 5", rounds.keys().last().unwrap()))
}

fn random_nfa(rng: &mut ChaCha8Rng) -> WordAutomaton {
    let n = rng.gen_range(1..=5);
    let k = rng.gen_range(1..=2);
    let mut a = WordAutomaton::new(Mode::NfaFinite, (0..k).map(|x| ((b'a' + x as u8) as char).to_string()).collect(), n);
    a.initial = Some(0);
    for q in 0..n {
        a.accepting[q] = rng.gen_bool(0.2);
        for l in 0..k {
            for r in 0..n {
                if rng.gen_bool(0.25) {
                    a.add_transition(q, l, r);
                }
            }
        }
    }
    a
}

/// Forward reachability of an accepting state.
fn nfa_empty(a: &WordAutomaton) -> bool {
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<usize> = a.initial.into_iter().collect();
    while let Some(q) = stack.pop() {
        if !seen[q] {
            seen[q] = true;
            for l in 0..a.num_letters() {
                stack.extend(a.successors(q, l));
            }
        }
    }
    !(0..a.num_states()).any(|q| seen[q] && a.accepting[q])
}

fn c4_bounds() -> Verdict {
    let mut checked = 0;
    for seed in 0..1000u64 {
        for shape in [SMALL, TINY] {
            let g = random_game(seed, shape);
            ensure!(bound_holds(&g), "seed {seed}: {} states > {}", non_hierarchy_nfa(&g).num_states(), nfa_bound(&g));
            checked += 1;
        }
    }
    for (name, g) in fixture_games() {
        ensure!(bound_holds(&g), "{name}: bound exceeded");
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let a = random_nfa(&mut rng);
        for g in [gen_from_nfa_emptiness(&a), gen_from_nfa_universality(&a)] {
            let g = g.map_err(|e| e.to_string())?;
            ensure!(bound_holds(&g), "generated instance {k}: bound exceeded");
            checked += 1;
        }
    }
    Ok(format!("{checked} instances within 2n²|V|²"))
}

fn dynamic_games(count: usize) -> Vec<GameGraph> {
    (0u64..).map(|s| random_game(s, SMALL)).filter(|g| check_dynamic(g).is_ok()).take(count).collect()
}

fn paths(g: &GameGraph, depth: usize) -> Result<Vec<Vec<usize>>, String> {
    Ok(enumerate_histories(g, depth, 10_000_000).map_err(|e| e.to_string())?.into_iter().map(|h| h.path).collect())
}

/// Projects `ours` through `f` (None drops a history) and compares with `theirs` as a
/// bijection: equal sets, no two histories merged.
fn bijective(ours: &[Vec<usize>], f: impl Fn(&[usize]) -> Option<Vec<usize>>, theirs: &BTreeSet<Vec<usize>>) -> bool {
    let image: Vec<Vec<usize>> = ours.iter().filter_map(|p| f(p)).collect();
    let set: BTreeSet<Vec<usize>> = image.iter().cloned().collect();
    set.len() == image.len() && &set == theirs
}

fn c5_transforms() -> Verdict {
    for (k, g) in dynamic_games(100).iter().enumerate() {
        let sh = shadow_game(g).map_err(|e| e.to_string())?;
        let nominal: Vec<usize> = (0..g.players()).collect();
        ensure!(check_static(&sh.game) == StaticResult::Ordered(nominal), "dynamic game {k}: shadow not statically ordered");
    }
    for seed in 0..100u64 {
        let g = random_game(seed, SMALL);
        let r = restrict_to_hierarchical(&g, &WinningCondition::safety_for_game(&g, &[]), CAP).map_err(|e| e.to_string())?;
        ensure!(check_dynamic(&r.game).is_ok(), "seed {seed}: restriction not dynamic");
    }
    let depth = 6;
    let mut counted = Vec::new();
    for (name, g) in fixture_games() {
        let all: BTreeSet<Vec<usize>> = paths(&g, depth)?.into_iter().collect();
        let mut done = Vec::new();
        if let StaticResult::Ordered(o) = check_static(&g) {
            let p = hierarchical_observation_product(&g, &o).map_err(|e| e.to_string())?;
            let ok = bijective(&paths(&p.game, depth)?, |h| Some(h.iter().map(|&x| p.origin[x]).collect()), &all);
            ensure!(ok, "{name}: hierarchical observation");
            done.push("hierobs");
        }
        if check_dynamic(&g).is_ok() {
            // two moves of the shadow and cross-free games per move of g
            let even = |h: &[usize]| h.len() % 2 == 1;
            let sh = shadow_game(&g).map_err(|e| e.to_string())?;
            let sp: Vec<Vec<usize>> = paths(&sh.game, 2 * depth)?.into_iter().filter(|h| even(h)).collect();
            let ok = bijective(&sp, |h| h.iter().step_by(2).map(|&x| sh.origin[x]).collect(), &all);
            ensure!(ok, "{name}: shadow game");
            let ann = annotate_ranks(&g).map_err(|e| e.to_string())?;
            let cf = make_cross_free(&ann).map_err(|e| e.to_string())?;
            let cp: Vec<Vec<usize>> = paths(&cf.game, 2 * depth)?.into_iter().filter(|h| even(h)).collect();
            let ok = bijective(&cp, |h| Some(h.iter().step_by(2).map(|&x| ann.origin[cf.origin[x]]).collect()), &all);
            ensure!(ok, "{name}: cross-free game");
            done.extend(["shadow", "crossfree"]);
        }
        let flags = brute_flags(&g, depth);
        let hier: BTreeSet<Vec<usize>> = all.iter().filter(|p| (1..=p.len()).all(|k| flags[&p[..k]])).cloned().collect();
        let r = restrict_to_hierarchical(&g, &WinningCondition::safety_for_game(&g, &[]), CAP).map_err(|e| e.to_string())?;
        let ok = bijective(&paths(&r.game, depth)?, |h| h.iter().map(|&x| r.origin[x]).collect(), &hier);
        ensure!(ok, "{name}: restriction");
        done.push("restrict");
        counted.push(format!("{name}:{}", done.len()));
    }
    Ok(format!("shadow 100/100, restrict 100/100, depth-6 bijections on {} fixtures", counted.len()))
}

fn c6_synthesis() -> Verdict {
    let cfg = Config::default();
    let bad = support::never_bad();
    let mut checked = 0;
    let mut realizable = 0;
    let mut verified = 0;
    let mut slowest = Duration::ZERO;
    let mut seed = 0u64;
    while checked < 60 {
        seed += 1;
        ensure!(seed < 5000, "only {checked} tiny instances found");
        let g = support::colour_refined(&random_game(seed, TINY), seed ^ 0x5eed, 0.3);
        if check_preconditions(&g, &bad, &cfg).is_err() {
            continue;
        }
        let start = Instant::now();
        // decidable at depth 6: memory-2 search at depth 6 agrees with the search at a depth
        // that settles safety for memory-2 profiles
        let at6 = support::safe_profile_search(&g, &["bad"], 2, 6).is_some();
        let exact = support::safe_profile_search(&g, &["bad"], 2, 4 * g.num_positions()).is_some();
        if at6 != exact {
            continue;
        }
        let s = synthesize(&g, &bad, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(s.profile().is_some() == at6, "seed {seed}: synthesis {} vs exhaustive {at6}", s.profile().is_some());
        let h = synthesize_hierarchical(&g, &bad, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        for p in [s.profile(), h.profile()].into_iter().flatten() {
            ensure!(verify_strategy(&g, p, &bad, CAP).unwrap().is_none(), "seed {seed}: profile loses");
            verified += 1;
        }
        if let Some(p) = h.profile() {
            ensure!(non_hierarchical_outcome(&g, p, CAP).unwrap().is_none(), "seed {seed}: hierarchical profile leaves the restriction");
        }
        realizable += usize::from(at6);
        slowest = slowest.max(start.elapsed());
        ensure!(start.elapsed() < Duration::from_secs(30), "seed {seed}: {:?}", start.elapsed());
        checked += 1;
    }
    // soundness on larger games
    let larger = Shape { players: (2, 3), positions: 5, actions: 2, observations: 3, out_degree: 3 };
    let small_cfg = Config { max_classes: 2_000, max_assignments: 4_096, max_arena: 50_000, ..Config::default() };
    for seed in 0..80u64 {
        let g = support::colour_refined(&random_game(seed, larger), seed, 0.25);
        for r in [synthesize(&g, &bad, &small_cfg), synthesize_hierarchical(&g, &bad, &small_cfg)] {
            match r {
                Ok(s) => {
                    if let Some(p) = s.profile() {
                        ensure!(verify_strategy(&g, p, &bad, CAP).unwrap().is_none(), "seed {seed}: profile loses");
                        verified += 1;
                    }
                }
                Err(SynthesisError::NotRecurring(_)) | Err(SynthesisError::Core(hgame_core::CoreError::Cap { .. })) => {}
                Err(e) => return Err(format!("seed {seed}: {e}")),
            }
        }
    }
    Ok(format!(
        "{checked} tiny instances match memory-2 search ({realizable} realizable, slowest {:.2}s); {verified} profiles verified",
        slowest.as_secs_f64()
    ))
}

fn c7_reduction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut empty = 0;
    for k in 0..200 {
        let a = random_nfa(&mut rng);
        let g = gen_from_nfa_emptiness(&a).map_err(|e| e.to_string())?;
        let e = nfa_empty(&a);
        ensure!(check_dynamic(&g).is_ok() == e, "automaton {k}: dynamic {} vs empty {e}", check_dynamic(&g).is_ok());
        empty += usize::from(e);
    }
    Ok(format!("200 automata ({empty} empty) agree"))
}

fn c8_architecture() -> Verdict {
    let mut games = 0;
    for (name, g) in fixture_games() {
        let w = WinningCondition::safety(g.colors().names().to_vec(), &[]);
        let (arch, _) = game_to_arch(&g, &w).map_err(|e| e.to_string())?;
        let spec = condition_over_positions(&g, &w).map_err(|e| e.to_string())?;
        let ag = arch_to_game_reachable(&arch, &spec, CAP).map_err(|e| e.to_string())?;
        let ours = arch_common::labelled_histories(&ag.game, 5);
        let image: BTreeSet<_> = ours
            .iter()
            .map(|(h, path)| (h.clone(), path.iter().map(|&x| ag.origin[x].as_ref().map_or(usize::MAX, |o| o.monitor)).collect()))
            .collect();
        ensure!(image.len() == ours.len(), "{name}: two histories merge");
        ensure!(image == arch_common::labelled_histories(&g, 5), "{name}: histories differ");
        games += 1;
    }
    let w = HardWired::pipeline(vec![
        SignalAlphabet::signals(arch_common::names(&["0", "1"])),
        SignalAlphabet::new(arch_common::names(&["a", "b"]), arch_common::names(&["0", "1"])),
        SignalAlphabet::signals(arch_common::names(&["0", "1"])),
        SignalAlphabet::new(arch_common::names(&["c", "d"]), arch_common::names(&["-"])),
    ])
    .map_err(|e| e.to_string())?;
    let arch = wired_architecture(&w);
    let fb = add_feedback_links(&arch).map_err(|e| e.to_string())?;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ps: Vec<MooreMachine> = (1..=w.processes())
            .map(|i| {
                let (inputs, outputs) = (w.observation_names(i), w.stages[i].action_names());
                let k = rng.gen_range(1..=3);
                let delta = (0..k).map(|_| (0..inputs.len()).map(|_| rng.gen_range(0..k)).collect()).collect();
                let out = (0..k).map(|_| rng.gen_range(0..outputs.len())).collect();
                MooreMachine::new(inputs, outputs, 0, delta, out).unwrap()
            })
            .collect();
        let lifted = lift_programs(&w, &ps).map_err(|e| e.to_string())?;
        let before = arch.runs(Some(&ps), 6, CAP).map_err(|e| e.to_string())?;
        ensure!(!before.is_empty() && fb.runs(Some(&lifted), 6, CAP).map_err(|e| e.to_string())? == before, "seed {seed}: runs differ");
    }
    let g = common::fixture("privbit");
    let tw = WinningCondition::safety(g.colors().names().to_vec(), &[]);
    let s = sequentialize_pipeline(&g, &[0, 1], &tw, CAP).map_err(|e| e.to_string())?;
    let (depth, n) = (5, 2);
    let runs = s.source.runs(None, depth, CAP).map_err(|e| e.to_string())?;
    for alpha in &runs {
        let piped = s.pipe(&g, alpha, depth - n);
        ensure!(s.pipeline.is_run(&piped), "privbit: {alpha:?} does not pipe to a run");
        let tracked = s.tracked_positions(&g, &tw, &piped).map_err(|e| e.to_string())?.ok_or("privbit: lie detected")?;
        let mut v = vec![g.initial()];
        for &c in alpha {
            v.push(s.source.monitor.delta[*v.last().unwrap()][c]);
        }
        ensure!(tracked.len() == depth - 2 * n + 2 && tracked[..] == v[..tracked.len()], "privbit: pipe of {alpha:?} tracks {tracked:?}");
    }
    Ok(format!("round trip on {games} fixtures, feedback on 20 programs, pipe shift on {} privbit runs", runs.len()))
}

/// Invocations for every fixture; inputs are absolute, outputs relative to the working dir.
fn invocations() -> Vec<Vec<String>> {
    let dir = fixture_dir().canonicalize().unwrap();
    let f = |name: &str| dir.join(name).display().to_string();
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut push = |args: &[&str]| out.push(args.iter().map(|s| s.to_string()).collect());
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for p in &entries {
        let file = p.file_name().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(p).unwrap();
        let kind = hgame_core::doc::peek_kind(&text).unwrap();
        let path = f(&file);
        match kind.as_str() {
            "game" => {
                let stem = file.trim_end_matches(".json");
                let spec = dir.join(format!("{stem}.spec.json"));
                let spec = spec.exists().then(|| spec.display().to_string());
                for k in ["static", "dynamic", "recurring", "gap"] {
                    push(&["check", k, &path, "--witness", "witness.json"]);
                }
                for k in ["hierobs", "shadow", "crossfree", "restrict"] {
                    push(&["transform", k, &path, "out.json", "--spec-out", "spec.json"]);
                }
                push(&["game2arch", &path, "arch.json", "--spec-out", "spec.json"]);
                push(&["sequentialize", &path, "pipe.json", "--spec-out", "spec.json"]);
                if let Some(s) = &spec {
                    push(&["synthesize", &path, s, "profile.json"]);
                    push(&["synthesize", "--hierarchical", &path, s, "profile.json"]);
                    push(&["transform", "restrict", &path, "out.json", "--spec", s]);
                }
            }
            "architecture" => {
                push(&["arch2game", &path, "game.json", "--spec-out", "spec.json"]);
                push(&["arch2game", "--reachable", &path, "game.json"]);
                push(&["router", &path, "--output", "routed.json"]);
            }
            _ => {}
        }
    }
    for n in ["1", "2", "3"] {
        push(&["pipeline", n, "monitor.json"]);
        push(&["pipeline", n, "arch.json", "--feedback", "--architecture", "--signals", "a,b,c"]);
        push(&["gen", "prime", n, "prime.json"]);
    }
    out
}

/// stdout, stderr, exit code and every file left in `dir`.
fn run_in(dir: &Path, args: &[String]) -> (Vec<u8>, Vec<u8>, Option<i32>, BTreeMap<String, Vec<u8>>) {
    for e in std::fs::read_dir(dir).unwrap() {
        std::fs::remove_file(e.unwrap().path()).unwrap();
    }
    let o = Command::new(env!("CARGO_BIN_EXE_hgame")).args(args).current_dir(dir).output().expect("hgame runs");
    let files = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    (o.stdout, o.stderr, o.status.code(), files)
}

fn c9_determinism() -> Verdict {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut codes: HashMap<Option<i32>, usize> = HashMap::new();
    let calls = invocations();
    for args in &calls {
        let x = run_in(a.path(), args);
        let y = run_in(b.path(), args);
        ensure!(x == y, "`hgame {}` differs between runs", args.join(" "));
        ensure!(matches!(x.2, Some(0..=2)), "`hgame {}` exited with {:?}", args.join(" "), x.2);
        *codes.entry(x.2).or_default() += 1;
    }
    let c = |k| codes.get(&Some(k)).copied().unwrap_or(0);
    Ok(format!("{} invocations byte-identical (exit 0/1/2: {}/{}/{})", calls.len(), c(0), c(1), c(2)))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("decider/oracle agreement", c1_deciders),
        ("recurring decider", c2_recurring),
        ("prime family", c3_primes),
        ("state bounds", c4_bounds),
        ("transformation contracts", c5_transforms),
        ("synthesis soundness and completeness", c6_synthesis),
        ("hardness-reduction generator", c7_reduction),
        ("architecture round trip", c8_architecture),
        ("determinism", c9_determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {}: PASS  {name} ({t:.1}s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({t:.1}s): {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
