#[path = "../../hgame-hierarchy/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap};

use common::{fixture, fixture_games, random_game, Layer, SMALL};
use hgame_core::game::{enumerate_histories, histories_of_length};
use hgame_core::{GameGraph, MooreMachine, StrategyProfile, WinningCondition};
use hgame_hierarchy::{check_dynamic, check_static, information_preorder, StaticResult};
use hgame_transforms::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 1_000_000;

fn out_on(m: &MooreMachine, path: &[usize]) -> String {
    let word: Vec<usize> = path[1..].to_vec();
    m.output_names[m.output_after(&word).unwrap()].clone()
}

fn translator_agrees(g: &GameGraph, i: usize, j: usize, m: &MooreMachine, depth: usize) -> bool {
    enumerate_histories(g, depth, CAP).unwrap().iter().all(|h| {
        let o = m.output_after(&g.obs_word(&h.path, i)).unwrap();
        m.output_names[o] == g.observations(j).name(g.obs(h.last(), j))
    })
}

fn dynamic_games(seed: u64, count: usize) -> Vec<GameGraph> {
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        let g = random_game(s, SMALL);
        s += 1;
        if check_dynamic(&g).is_ok() {
            out.push(g);
        }
    }
    out
}

/// 1-based ranks of every player at every history of one length, by brute force.
fn brute_ranks(layer: &Layer, n: usize) -> Vec<Vec<usize>> {
    let inc: Vec<Vec<Vec<bool>>> = (0..n).map(|i| (0..n).map(|j| layer.included(i, j)).collect()).collect();
    (0..layer.paths.len())
        .map(|k| {
            (0..n)
                .map(|i| {
                    1 + (0..n)
                        .filter(|&j| {
                            j != i
                                && ((inc[j][i][k] && !inc[i][j][k]) || (j < i && inc[j][i][k] && inc[i][j][k]))
                        })
                        .count()
                })
                .collect()
        })
        .collect()
}

#[test]
fn translator_examples() {
    let g = fixture("pubcoin");
    let m = translator_moore(&g, 0, 1).unwrap();
    assert!(translator_agrees(&g, 0, 1, &m, 4));
    let g = fixture("privbit");
    let m = translator_moore(&g, 0, 1).unwrap();
    assert!(translator_agrees(&g, 0, 1, &m, 4));
    for h in histories_of_length(&g, 3, CAP).unwrap() {
        assert_eq!(m.output_names[m.output_after(&g.obs_word(&h.path, 0)).unwrap()], "o");
    }
    assert!(matches!(translator_moore(&g, 1, 0), Err(TransformError::NotFunctional { .. })));
}

#[test]
fn hierarchical_observation_examples() {
    for name in ["pubcoin", "privbit"] {
        let g = fixture(name);
        let h = to_hierarchical_observation(&g, &[0, 1]).unwrap();
        assert_eq!(positional_violation(&h, &[0, 1]), None, "{name}");
    }
}

#[test]
fn rank_and_order_examples() {
    let g = fixture("pubcoin");
    let r = rank_signal(&g, 0).unwrap();
    assert_eq!(r.num_states(), 1);
    assert_eq!(r.output_names[r.out[0]], "1");

    let g = fixture("swap");
    let id = |n: &str| g.positions().get(n).unwrap();
    let r2 = rank_signal(&g, 1).unwrap();
    assert_eq!(out_on(&r2, &[id("v0"), id("v2")]), "2");
    assert_eq!(out_on(&r2, &[id("v0"), id("v2"), id("v4")]), "1");
    let o12 = relative_order_signal(&g, 0, 1).unwrap();
    assert_eq!(out_on(&o12, &[id("v0"), id("v2")]), "1");
    assert_eq!(out_on(&o12, &[id("v0"), id("v2"), id("v4")]), "0");

    let g = fixture("privbit");
    for h in enumerate_histories(&g, 4, CAP).unwrap() {
        let same = relative_order_signal(&g, 1, 1).unwrap();
        assert_eq!(out_on(&same, &h.path), "1");
        assert_eq!(out_on(&relative_order_signal(&g, 0, 1).unwrap(), &h.path), "1");
        if h.len() >= 1 {
            assert_eq!(out_on(&relative_order_signal(&g, 1, 0).unwrap(), &h.path), "0");
        }
    }
    assert!(matches!(rank_signal(&fixture("fork2"), 0), Err(TransformError::NotDynamic(_))));
}

#[test]
fn annotation_examples() {
    let a = annotate_ranks(&fixture("pubcoin")).unwrap();
    assert!(a.rank.iter().all(|r| r == &vec![1, 2]));
    let g = fixture("swap");
    let a = annotate_ranks(&g).unwrap();
    let v4 = g.positions().get("v4").unwrap();
    let copies: Vec<usize> = (0..a.game.num_positions()).filter(|&p| a.origin[p] == v4).collect();
    assert!(!copies.is_empty());
    for p in copies {
        assert_eq!(a.rank[p], vec![2, 1]);
        assert!(!a.below[p][0][1] && a.below[p][1][0]);
    }
}

fn regular_histories(cf: &CrossFreeGame, ann: &RankAnnotatedGame, depth: usize) -> BTreeSet<Vec<usize>> {
    enumerate_histories(&cf.game, 2 * depth, CAP)
        .unwrap()
        .into_iter()
        .filter(|h| h.len() % 2 == 0)
        .map(|h| h.path.iter().step_by(2).map(|&p| ann.origin[cf.origin[p]]).collect())
        .collect()
}

#[test]
fn cross_free_examples() {
    let g = fixture("pubcoin");
    let ann = annotate_ranks(&g).unwrap();
    let cf = make_cross_free(&ann).unwrap();
    assert!(find_crossing(&cf.game, 6).is_none());
    let ours = regular_histories(&cf, &ann, 3);
    let theirs: BTreeSet<Vec<usize>> = enumerate_histories(&g, 3, CAP).unwrap().into_iter().map(|h| h.path).collect();
    assert_eq!(ours, theirs);

    let g = fixture("swap");
    assert!(find_crossing(&g, 4).is_some());
    let ann = annotate_ranks(&g).unwrap();
    let cf = make_cross_free(&ann).unwrap();
    assert!(find_crossing(&cf.game, 8).is_none());
    for p in 0..cf.game.num_positions() {
        if cf.intermediary[p] {
            assert_eq!(cf.game.successors(p).len(), 1);
            assert_eq!(cf.game.colors().name(cf.game.color(p)), SKIP);
        }
    }
}

#[test]
fn shadow_examples() {
    let g = fixture("pubcoin");
    let sh = shadow_game(&g).unwrap();
    assert!(sh.rank.iter().all(|r| r == &vec![1, 2]));
    for p in 0..sh.game.num_positions() {
        if p != sh.sink {
            assert!(sh.game.observations(0).name(sh.game.obs(p, 0)).starts_with("1:"));
        }
    }
    let sh = shadow_game(&fixture("swap")).unwrap();
    assert_eq!(check_static(&sh.game), StaticResult::Ordered(vec![0, 1]));
}

#[test]
fn restrict_examples() {
    let g = fixture("pubcoin");
    let w = WinningCondition::safety_for_game(&g, &[]);
    let r = restrict_to_hierarchical(&g, &w, CAP).unwrap();
    assert!(r.sink.is_none());
    assert_eq!(r.game.num_positions(), 3);

    let g = fixture("fork2");
    let w = WinningCondition::safety_for_game(&g, &[]);
    let r = restrict_to_hierarchical(&g, &w, CAP).unwrap();
    let s = r.sink.unwrap();
    assert_eq!(r.game.successors(r.game.initial()), &[s]);
    assert!(check_dynamic(&r.game).is_ok());
    let lose = r.game.colors().get(LOSE).unwrap();
    assert!(!r.condition.accepts_lasso(&[0], &[lose]));
}

/// Player order in which check_static witnessed the game; None if refuted.
fn order(g: &GameGraph) -> Option<Vec<usize>> {
    match check_static(g) {
        StaticResult::Ordered(o) => Some(o),
        StaticResult::Refuted(_) => None,
    }
}

/// Memoryless shadow strategy: state = last observation, action valid for the tagged player.
fn random_shadow_profile(sh: &ShadowGame, g: &GameGraph, rng: &mut ChaCha8Rng) -> StrategyProfile {
    let s = &sh.game;
    let machines = (0..g.players())
        .map(|j| {
            let obs = s.observations(j);
            let k = obs.len();
            let out = (0..k)
                .map(|b| {
                    let tag = obs.name(b).split(':').next().unwrap();
                    match tag.parse::<usize>() {
                        Ok(i) => {
                            let acts = g.actions(i - 1);
                            let a = acts.name(rng.gen_range(0..acts.len()));
                            s.actions(j).get(a).unwrap()
                        }
                        Err(_) => 0,
                    }
                })
                .collect();
            let delta = vec![(0..k).collect::<Vec<usize>>(); k];
            MooreMachine::new(obs.names().to_vec(), s.actions(j).names().to_vec(), s.obs(s.initial(), j), delta, out)
                .unwrap()
        })
        .collect();
    StrategyProfile { machines }
}

fn outcomes(g: &GameGraph, s: &StrategyProfile, depth: usize) -> Vec<Vec<usize>> {
    let mut layer = vec![vec![g.initial()]];
    let mut all = layer.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &layer {
            let a = s.profile_at(g, p);
            for &w in g.post(*p.last().unwrap(), g.encode_profile(&a)) {
                let mut q = p.clone();
                q.push(w);
                next.push(q);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn check_redistribution(g: &GameGraph, seed: u64, depth: usize) -> std::result::Result<(), String> {
    let sh = shadow_game(g).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = random_shadow_profile(&sh, g, &mut rng);
    let s = redistribute_strategy(&sigma, &sh, g).map_err(|e| e.to_string())?;
    s.check(g).map_err(|e| e.to_string())?;
    let ours: BTreeSet<Vec<usize>> = outcomes(g, &s, depth).into_iter().collect();
    let theirs: BTreeSet<Vec<usize>> = outcomes(&sh.game, &sigma, 2 * depth)
        .into_iter()
        .filter(|p| p.len() % 2 == 1 && !p.contains(&sh.sink))
        .map(|p| p.iter().step_by(2).map(|&x| sh.origin[x].unwrap()).collect())
        .collect();
    if ours == theirs {
        Ok(())
    } else {
        Err(format!("{} vs {} outcomes", ours.len(), theirs.len()))
    }
}

/// For every shadow history ending at a regular position, the information set of the shadow
/// player of rank^i equals player i's, after projecting onto the input game.
fn shadow_information_sets_match(g: &GameGraph, sh: &ShadowGame, depth: usize) -> bool {
    let n = g.players();
    for len in 0..=depth {
        let gl = Layer::new(g, len);
        let sl = Layer::new(&sh.game, 2 * len);
        let proj = |p: &[usize]| -> Option<Vec<usize>> {
            p.iter().step_by(2).map(|&x| sh.origin[x]).collect::<Option<Vec<usize>>>()
        };
        let gi: HashMap<Vec<usize>, usize> = gl.paths.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
        let projected: Vec<Option<usize>> = sl.paths.iter().map(|p| proj(p).map(|q| gi[&q])).collect();
        for (k, p) in sl.paths.iter().enumerate() {
            let Some(gk) = projected[k] else { continue };
            let last = *p.last().unwrap();
            for i in 0..n {
                let j = sh.rank[last][i] - 1;
                let mine: BTreeSet<usize> = (0..gl.paths.len()).filter(|&x| gl.words[i][x] == gl.words[i][gk]).collect();
                let shadow: BTreeSet<usize> = (0..sl.paths.len())
                    .filter(|&x| sl.words[j][x] == sl.words[j][k])
                    .filter_map(|x| projected[x])
                    .collect();
                if mine != shadow {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn fixtures_preserve_history_structure() {
    for (name, g) in fixture_games() {
        if let Some(o) = order(&g) {
            let p = hierarchical_observation_product(&g, &o).unwrap();
            assert_eq!(positional_violation(&p.game, &o), None, "{name}");
            let a: BTreeSet<Vec<usize>> = enumerate_histories(&p.game, 6, CAP)
                .unwrap()
                .into_iter()
                .map(|h| h.path.iter().map(|&x| p.origin[x]).collect())
                .collect();
            let b = enumerate_histories(&g, 6, CAP).unwrap();
            assert_eq!(a.len(), b.len(), "{name}");
        }
        if check_dynamic(&g).is_ok() {
            let sh = shadow_game(&g).unwrap();
            assert!(information_preorder(&sh.game).iter().enumerate().all(|(j, r)| r[j..].iter().all(|&x| x)), "{name}");
            assert!(shadow_information_sets_match(&g, &sh, 3), "{name}");
            check_redistribution(&g, 5, 6).unwrap_or_else(|e| panic!("{name}: {e}"));
            let ann = annotate_ranks(&g).unwrap();
            let cf = make_cross_free(&ann).unwrap();
            assert!(find_crossing(&cf.game, 6).is_none(), "{name}");
            let ours = regular_histories(&cf, &ann, 3);
            assert_eq!(ours.len(), enumerate_histories(&g, 3, CAP).unwrap().len(), "{name}");
        }
        let w = WinningCondition::safety_for_game(&g, &[]);
        let r = restrict_to_hierarchical(&g, &w, CAP).unwrap();
        assert!(check_dynamic(&r.game).is_ok(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn translators_reproduce_observations(seed in any::<u64>()) {
        let g = random_game(seed, SMALL);
        let below = information_preorder(&g);
        for i in 0..g.players() {
            for j in 0..g.players() {
                if i != j && below[i][j] {
                    let m = translator_moore(&g, i, j).unwrap();
                    prop_assert!(translator_agrees(&g, i, j, &m, 5));
                } else if i != j {
                    prop_assert!(translator_moore(&g, i, j).is_err());
                }
            }
        }
    }

    #[test]
    fn hierarchical_observation_contract(seed in any::<u64>()) {
        let g = random_game(seed, SMALL);
        if let Some(o) = order(&g) {
            let p = hierarchical_observation_product(&g, &o).unwrap();
            prop_assert_eq!(positional_violation(&p.game, &o), None);
            let hs = enumerate_histories(&p.game, 5, CAP).unwrap();
            let proj: BTreeSet<Vec<usize>> = hs.iter().map(|h| h.path.iter().map(|&x| p.origin[x]).collect()).collect();
            let orig: BTreeSet<Vec<usize>> = enumerate_histories(&g, 5, CAP).unwrap().into_iter().map(|h| h.path).collect();
            prop_assert_eq!(hs.len(), orig.len());
            prop_assert_eq!(&proj, &orig);
            for h in &hs {
                let q: Vec<usize> = h.path.iter().map(|&x| p.origin[x]).collect();
                for i in 0..g.players() {
                    let a: Vec<String> = h.path[1..].iter().map(|&x| {
                        p.game.observations(i).name(p.game.obs(x, i)).split('+').next().unwrap().to_string()
                    }).collect();
                    let b: Vec<String> = q[1..].iter().map(|&x| g.observations(i).name(g.obs(x, i)).to_string()).collect();
                    prop_assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn signals_information_consistent_and_correct(seed in any::<u64>()) {
        let g = dynamic_games(seed, 1).pop().unwrap();
        let n = g.players();
        let ann = annotate_ranks(&g).unwrap();
        for len in 0..=5 {
            let layer = Layer::new(&g, len);
            let ranks = brute_ranks(&layer, n);
            let al = histories_of_length(&ann.game, len, CAP).unwrap();
            let by_path: HashMap<Vec<usize>, usize> =
                al.iter().map(|h| (h.path.iter().map(|&x| ann.origin[x]).collect(), h.last())).collect();
            for (k, p) in layer.paths.iter().enumerate() {
                prop_assert_eq!(&ann.rank[by_path[p]], &ranks[k]);
            }
            // equal observation words give equal ranks
            for i in 0..n {
                let mut seen: HashMap<usize, usize> = HashMap::new();
                for k in 0..layer.paths.len() {
                    let r = ranks[k][i];
                    prop_assert_eq!(*seen.entry(layer.words[i][k]).or_insert(r), r);
                }
            }
        }
    }

    #[test]
    fn shadow_is_static_in_nominal_order(seed in any::<u64>()) {
        let g = dynamic_games(seed, 1).pop().unwrap();
        let sh = shadow_game(&g).unwrap();
        let below = information_preorder(&sh.game);
        for a in 0..g.players() {
            for b in a + 1..g.players() {
                prop_assert!(below[a][b], "shadow {} not below {}", a + 1, b + 1);
            }
        }
        prop_assert!(shadow_information_sets_match(&g, &sh, 2));
        prop_assert!(check_redistribution(&g, seed, 4).is_ok());
    }

    #[test]
    fn restriction_is_dynamic(seed in any::<u64>()) {
        let g = random_game(seed, SMALL);
        let w = WinningCondition::safety_for_game(&g, &[]);
        let r = restrict_to_hierarchical(&g, &w, CAP).unwrap();
        prop_assert!(check_dynamic(&r.game).is_ok());
    }
}
