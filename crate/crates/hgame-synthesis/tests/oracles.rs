#[path = "../../hgame-hierarchy/tests/common/mod.rs"]
mod common;
mod support;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use hgame_core::{GameGraph, MooreMachine, StrategyProfile, WinningCondition};
use hgame_hierarchy::check_static;
use hgame_synthesis::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_game, Shape};
use support::*;

const TINY: Shape = Shape { players: (2, 2), positions: 4, actions: 2, observations: 2, out_degree: 2 };

/// Tiny instance with observations refining the colours, if its information is recurring.
fn tiny(seed: u64) -> Option<GameGraph> {
    let g = colour_refined(&random_game(seed, TINY), seed ^ 0x5eed, 0.3);
    let cfg = Config::default();
    check_preconditions(&g, &never_bad(), &cfg).ok().map(|_| g)
}

#[test]
fn small_instance_completeness() {
    let cfg = Config::default();
    let mut checked = 0;
    let mut realizable = 0;
    let mut seed = 0u64;
    while checked < 60 {
        seed += 1;
        assert!(seed < 5000, "too few tiny instances");
        let Some(g) = tiny(seed) else { continue };
        let start = Instant::now();
        // safety with machines of ≤ 2 states is settled within |V|·2·2 moves
        let exact = 4 * g.num_positions();
        let at6 = safe_profile_search(&g, &["bad"], 2, 6).is_some();
        let full = safe_profile_search(&g, &["bad"], 2, exact);
        if at6 != full.is_some() {
            continue;
        }
        let s = synthesize(&g, &never_bad(), &cfg).unwrap();
        assert_eq!(s.profile().is_some(), at6, "seed {seed}: synthesis disagrees with memory-2 search");
        if let Some(p) = s.profile() {
            realizable += 1;
            assert_eq!(verify_strategy(&g, p, &never_bad(), 100_000).unwrap(), None);
        }
        if let Some(p) = full {
            assert_eq!(verify_strategy(&g, &p, &never_bad(), 100_000).unwrap(), None, "seed {seed}");
        }
        let h = synthesize_hierarchical(&g, &never_bad(), &cfg).unwrap();
        if let Some(p) = h.profile() {
            assert_eq!(verify_strategy(&g, p, &never_bad(), 100_000).unwrap(), None);
            assert_eq!(non_hierarchical_outcome(&g, p, 100_000).unwrap(), None);
            assert!(s.profile().is_some());
        }
        assert!(start.elapsed() < Duration::from_secs(30), "seed {seed} too slow");
        checked += 1;
    }
    assert!(realizable > 0 && realizable < checked, "{realizable} of {checked} realizable");
}

fn random_arena(seed: u64, max: usize, priorities: u32) -> ParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max);
    let mut g = ParityGame::default();
    for _ in 0..n {
        let o = if rng.gen_bool(0.5) { Owner::Synthesizer } else { Owner::Nature };
        g.add_vertex(o, rng.gen_range(0..priorities));
    }
    for v in 0..n {
        let d = rng.gen_range(1..=3.min(n));
        while g.succ[v].len() < d {
            let t = rng.gen_range(0..n);
            if !g.succ[v].contains(&t) {
                g.succ[v].push(t);
            }
        }
    }
    g
}

/// Game-tree evaluation of "no bad vertex within `d` moves", memoized on (vertex, depth).
fn minimax(g: &ParityGame, bad: &[bool], v: usize, d: usize, memo: &mut HashMap<(usize, usize), bool>) -> bool {
    if bad[v] {
        return false;
    }
    if d == 0 {
        return true;
    }
    if let Some(&r) = memo.get(&(v, d)) {
        return r;
    }
    let succ = g.succ[v].clone();
    let r = match g.owner[v] {
        Owner::Synthesizer => succ.iter().any(|&t| minimax(g, bad, t, d - 1, memo)),
        Owner::Nature => succ.iter().all(|&t| minimax(g, bad, t, d - 1, memo)),
    };
    memo.insert((v, d), r);
    r
}

/// Synthesizer wins from v iff some positional choice leaves Nature no reachable cycle with
/// odd maximal priority.
fn brute_parity(g: &ParityGame, v: usize) -> bool {
    let mine: Vec<usize> = (0..g.len()).filter(|&u| g.owner[u] == Owner::Synthesizer).collect();
    let radix: Vec<usize> = mine.iter().map(|&u| g.succ[u].len()).collect();
    hgame_core::game::all_profiles(&radix).into_iter().any(|choice| {
        let mut edges: Vec<Vec<(usize, usize)>> = g.succ.iter().map(|s| s.iter().map(|&t| (t, t)).collect()).collect();
        for (k, &u) in mine.iter().enumerate() {
            let t = g.succ[u][choice[k]];
            edges[u] = vec![(t, t)];
        }
        hgame_core::automaton::odd_cycle(g.len(), v, &edges, &g.priority).is_none()
    })
}

#[test]
fn safety_solver_matches_minimax() {
    for seed in 0..100 {
        let g = random_arena(seed, 20, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let bad: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(0.2)).collect();
        let s = g.solve_safety(&bad);
        let depth = g.len().max(10);
        let mut memo = HashMap::new();
        for v in 0..g.len() {
            assert_eq!(s.winner[v] == Owner::Synthesizer, minimax(&g, &bad, v, depth, &mut memo), "seed {seed} v{v}");
        }
        // the positional strategy keeps Synthesizer's region safe
        for v in 0..g.len() {
            if s.winner[v] == Owner::Synthesizer {
                assert!(!bad[v]);
                let next: Vec<usize> = if g.owner[v] == Owner::Synthesizer { vec![s.strategy[v]] } else { g.succ[v].clone() };
                assert!(next.iter().all(|&t| s.winner[t] == Owner::Synthesizer));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zielonka_matches_positional_brute_force(seed in any::<u64>()) {
        let g = random_arena(seed, 7, 4);
        let s = g.solve();
        for v in 0..g.len() {
            prop_assert_eq!(s.winner[v] == Owner::Synthesizer, brute_parity(&g, v), "vertex {}", v);
        }
    }
}

fn arenas(seed: u64) -> Option<(GameGraph, KnowledgeArena)> {
    let g = tiny(seed)?;
    let a = unfold_quotient(&g, &never_bad(), &Config::default()).unwrap();
    Some((g, a))
}

fn multiset(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn update_follows_the_moves(seed in any::<u64>()) {
        let Some((g, a)) = arenas(seed) else { return Ok(()) };
        for (r, m) in a.models.iter().enumerate() {
            prop_assert!(m.is_connected());
            prop_assert!(m.color(&g).is_some());
            for (k, asg) in a.assignments[r].iter().enumerate() {
                prop_assert!(asg.is_consistent(m));
                let expected: Vec<usize> = (0..m.len())
                    .flat_map(|x| g.post(m.pos[x], g.encode_profile(&asg.profiles[x])).to_vec())
                    .collect();
                let got: Vec<usize> = epistemic_update(m, asg, &g).into_iter().flat_map(|c| c.pos).collect();
                prop_assert_eq!(multiset(got), multiset(expected.clone()));
                let stepped: Vec<usize> = a.steps[r][k].iter().flat_map(|s| s.sources.iter().map(|x| x.1)).collect();
                prop_assert_eq!(multiset(stepped), multiset(expected));
                for s in &a.steps[r][k] {
                    prop_assert_eq!(a.color[s.target], a.models[s.target].color(&g).unwrap());
                }
            }
        }
    }

    #[test]
    fn quotient_is_an_equivalence(seed in any::<u64>()) {
        let Some((g, a)) = arenas(seed) else { return Ok(()) };
        let mut sample: Vec<EpistemicModel> = a.models.iter().take(4).cloned().collect();
        for (r, m) in a.models.iter().enumerate().take(3) {
            for asg in a.assignments[r].iter().take(2) {
                sample.extend(epistemic_update(m, asg, &g));
            }
        }
        sample.truncate(10);
        let eq: Vec<Vec<bool>> = sample.iter().map(|x| sample.iter().map(|y| homomorphic_equiv(x, y)).collect()).collect();
        for x in 0..sample.len() {
            prop_assert!(eq[x][x]);
            for y in 0..sample.len() {
                prop_assert_eq!(eq[x][y], eq[y][x]);
                for z in 0..sample.len() {
                    prop_assert!(!(eq[x][y] && eq[y][z]) || eq[x][z]);
                }
            }
        }
        // distinct representatives are inequivalent, and cores are equivalent to their source
        for x in 0..a.models.len().min(8) {
            for y in 0..x {
                prop_assert!(!homomorphic_equiv(&a.models[x], &a.models[y]));
            }
        }
        for m in &sample {
            prop_assert!(homomorphic_equiv(m, &core(m).0));
        }
    }

    #[test]
    fn static_games_have_chain_ordered_models(seed in any::<u64>()) {
        let g = uniform(&random_game(seed, TINY));
        prop_assume!(check_static(&g).is_ok());
        let a = unfold_quotient(&g, &never_bad(), &Config::default()).unwrap();
        prop_assert!(a.num_classes() < 200, "{} classes", a.num_classes());
        for m in &a.models {
            prop_assert!(m.is_chain_ordered());
        }
    }
}

const SMALLER: Shape = Shape { players: (2, 3), positions: 5, actions: 2, observations: 3, out_degree: 3 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    /// Profiles are verified inside synthesis; an unsound one would surface as an error.
    #[test]
    fn synthesis_is_sound(seed in any::<u64>()) {
        let g = colour_refined(&random_game(seed, SMALLER), seed, 0.25);
        let cfg = Config { max_classes: 2_000, max_assignments: 4_096, max_arena: 50_000, ..Config::default() };
        for r in [synthesize(&g, &never_bad(), &cfg), synthesize_hierarchical(&g, &never_bad(), &cfg)] {
            match r {
                Ok(s) => {
                    if let Some(p) = s.profile() {
                        prop_assert_eq!(verify_strategy(&g, p, &never_bad(), 1_000_000).unwrap(), None);
                    }
                }
                Err(SynthesisError::NotRecurring(_)) | Err(SynthesisError::Core(hgame_core::CoreError::Cap { .. })) => {}
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }
}

fn random_profile(g: &GameGraph, rng: &mut ChaCha8Rng) -> StrategyProfile {
    let machines = (0..g.players())
        .map(|i| {
            let k = rng.gen_range(1..=2);
            let nb = g.observations(i).len();
            let delta = (0..k).map(|_| (0..nb).map(|_| rng.gen_range(0..k)).collect()).collect();
            let out = (0..k).map(|_| rng.gen_range(0..g.actions(i).len())).collect();
            MooreMachine::new(g.observations(i).names().to_vec(), g.actions(i).names().to_vec(), 0, delta, out).unwrap()
        })
        .collect();
    StrategyProfile { machines }
}

#[test]
fn verification_matches_play_enumeration_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, g) in common::fixture_games() {
        let g = g.complete();
        for c in g.colors().names() {
            let w = WinningCondition::safety(g.colors().names().to_vec(), &[g.colors().get(c).unwrap()]);
            for _ in 0..20 {
                let s = random_profile(&g, &mut rng);
                // a bad state of the finite product is reached within its size
                let size = outcome_graph(&g, &s, &w, 100_000).unwrap().states.len();
                let depth = size.max(8);
                let v = verify_strategy(&g, &s, &w, 100_000).unwrap();
                assert_eq!(v.is_none(), safe_to_depth(&g, &s, &[c.as_str()], depth), "{name}, bad {c}");
            }
        }
    }
}
