use std::collections::{BTreeSet, HashMap, VecDeque};

use hgame_core::automaton::{Mode, WordAutomaton};
use hgame_core::condition::ColorMap;
use hgame_core::game::all_profiles;
use hgame_core::{validate_game, CoreError, GameBuilder, GameGraph, WinningCondition};
use hgame_transforms::LOSE;

use crate::error::{cap, ArchError, Result};
use crate::monitor::{decode, tuple_name, MonitoredArchitecture, ViewMonitor};
use crate::process::Process;

/// Position (b, m, q^1, …, q^n) of the game of an architecture.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub observation: Vec<usize>,
    pub monitor: usize,
    pub states: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ArchGame {
    pub game: GameGraph,
    pub condition: WinningCondition,
    /// `None` for the sink reached by disabled actions.
    pub origin: Vec<Option<Origin>>,
    /// The monitor whose states appear in `origin`; it remembers the last global action when
    /// the specification reads global actions.
    pub monitor: ViewMonitor,
}

/// |B|·|M|·Π|Q^i|
pub fn product_size(arch: &MonitoredArchitecture) -> usize {
    let b: usize = arch.monitor.observation_sizes().iter().product();
    b * arch.monitor.num_states() * arch.processes.iter().map(|p| p.num_states()).product::<usize>()
}

/// The game over B × M × Q^1 × … × Q^n. Player i observes b^i and plays the actions of
/// process i; the Environment's action is Nature's choice. A profile using an action that
/// is disabled in the current process state leads to a losing sink.
///
/// `spec` reads either the monitor states or the global actions; in the second case the
/// monitor is first refined to remember the last global action.
pub fn arch_to_game(arch: &MonitoredArchitecture, spec: &WinningCondition, limit: usize) -> Result<ArchGame> {
    build(arch, spec, true, limit)
}

/// The part of [`arch_to_game`] reachable from the initial position.
pub fn arch_to_game_reachable(arch: &MonitoredArchitecture, spec: &WinningCondition, limit: usize) -> Result<ArchGame> {
    build(arch, spec, false, limit)
}

enum Colouring {
    States,
    Actions(Vec<Option<usize>>),
}

fn build(arch: &MonitoredArchitecture, spec: &WinningCondition, full: bool, limit: usize) -> Result<ArchGame> {
    arch.check()?;
    let (mon, colouring) = if spec.colors() == arch.monitor.states.as_slice() {
        (arch.monitor.clone(), Colouring::States)
    } else if spec.colors() == arch.monitor.letter_names().as_slice() {
        let (m, last) = arch.monitor.with_action_memory();
        (m, Colouring::Actions(last))
    } else {
        return Err(ArchError::AlphabetMismatch(
            "the specification reads neither monitor states nor global actions".into(),
        ));
    };
    let n = arch.players();
    let ps = &arch.processes;
    let mut b = GameBuilder::new(n);
    for (i, p) in ps.iter().enumerate() {
        for a in &p.actions {
            b.action(i, a);
        }
        for o in &p.observations {
            b.observation(i, o);
        }
    }
    let colour_names: Vec<String> = match &colouring {
        Colouring::States => mon.states.clone(),
        Colouring::Actions(_) => std::iter::once("start".to_string()).chain(arch.monitor.letter_names()).collect(),
    };
    for c in &colour_names {
        b.color_symbol(c);
    }
    let colour_of = |m: usize| -> &str {
        match &colouring {
            Colouring::States => &mon.states[m],
            Colouring::Actions(last) => &colour_names[last[m].map_or(0, |c| c + 1)],
        }
    };

    let mut index: HashMap<Origin, usize> = HashMap::new();
    let mut origin: Vec<Option<Origin>> = Vec::new();
    let add = |b: &mut GameBuilder, index: &mut HashMap<Origin, usize>, origin: &mut Vec<Option<Origin>>, o: Origin| {
        if let Some(&id) = index.get(&o) {
            return Ok((id, false));
        }
        if origin.len() >= limit {
            return Err(cap("architecture game positions", limit));
        }
        let qs: Vec<&str> = o.states.iter().enumerate().map(|(i, &q)| ps[i].states[q].as_str()).collect();
        let name = format!("{}|{}|{}", mon.observation_name(&o.observation), mon.states[o.monitor], tuple_name(&qs));
        let obs: Vec<&str> = (0..n).map(|i| mon.observations[i][o.observation[i]].as_str()).collect();
        let id = b.add_position(&name, &obs, Some(colour_of(o.monitor)));
        index.insert(o.clone(), id);
        origin.push(Some(o));
        Ok((id, true))
    };

    let start = Origin {
        observation: mon.initial_observation.clone(),
        monitor: mon.initial,
        states: ps.iter().map(|p| p.initial).collect(),
    };
    let mut queue = VecDeque::new();
    if full {
        let mut sizes = mon.observation_sizes();
        sizes.push(mon.num_states());
        sizes.extend(ps.iter().map(|p| p.num_states()));
        let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).unwrap_or(usize::MAX);
        if total > limit {
            return Err(cap(format!("architecture game positions ({total} requested)"), limit));
        }
        for c in 0..total {
            let d = decode(&sizes, c);
            let o = Origin { observation: d[..n].to_vec(), monitor: d[n], states: d[n + 1..].to_vec() };
            add(&mut b, &mut index, &mut origin, o.clone())?;
            queue.push_back(o);
        }
    } else {
        add(&mut b, &mut index, &mut origin, start.clone())?;
        queue.push_back(start.clone());
    }
    let initial = index[&start];

    let sizes: Vec<usize> = ps.iter().map(|p| p.actions.len()).collect();
    let profiles = all_profiles(&sizes);
    let mut sink = None;
    let mut moves: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    while let Some(o) = queue.pop_front() {
        let from = index[&o];
        for a in &profiles {
            if (0..n).any(|i| ps[i].step(o.states[i], a[i], 0).is_none()) {
                let s = *sink.get_or_insert_with(|| {
                    let obs: Vec<&str> = vec![LOSE; n];
                    origin.push(None);
                    b.add_position(LOSE, &obs, Some(LOSE))
                });
                moves.push((from, a.clone(), s));
                continue;
            }
            let mut targets = BTreeSet::new();
            for d in 0..mon.actions[0].len() {
                let gamma: Vec<usize> = std::iter::once(d).chain(a.iter().copied()).collect();
                let (m2, out) = mon.step(o.monitor, mon.letter(&gamma));
                let states = (0..n).map(|i| ps[i].step(o.states[i], a[i], out[i]).expect("enabled")).collect();
                let t = Origin { observation: out.to_vec(), monitor: m2, states };
                let (id, fresh) = add(&mut b, &mut index, &mut origin, t.clone())?;
                if fresh {
                    queue.push_back(t);
                }
                targets.insert(id);
            }
            moves.extend(targets.into_iter().map(|t| (from, a.clone(), t)));
        }
    }
    if let Some(s) = sink {
        b.add_move_all(s, s);
    }
    for (f, a, t) in moves {
        b.add_move(f, a, t);
    }
    b.set_initial(initial);
    let game = b.build()?;

    let map: Vec<ColorMap> = game
        .colors()
        .names()
        .iter()
        .map(|c| {
            if c == LOSE {
                return ColorMap::Lose;
            }
            if matches!(colouring, Colouring::Actions(_)) && c == "start" {
                return ColorMap::Stutter;
            }
            ColorMap::Letter(spec.colors().iter().position(|x| x == c).expect("colour read by the specification"))
        })
        .collect();
    let condition = spec.pullback(game.colors().names().to_vec(), &map);
    Ok(ArchGame { game, condition, origin, monitor: mon })
}

/// Per player: the localised game read as an automaton over (action, observation of the
/// target), determinised and minimised; (a, b) pairs that cannot occur after an enabled a
/// lead to a fresh sink z.
pub fn localized_process(g: &GameGraph, i: usize) -> Process {
    let na = g.actions(i).len();
    let nb = g.observations(i).len();
    let letters: Vec<String> = (0..na * nb)
        .map(|c| tuple_name(&[g.actions(i).name(c % na), g.observations(i).name(c / na)]))
        .collect();
    let mut nfa = WordAutomaton::new(Mode::NfaFinite, letters, g.num_positions());
    nfa.state_names = g.positions().names().to_vec();
    nfa.initial = Some(g.initial());
    nfa.accepting = vec![true; g.num_positions()];
    for m in g.moves() {
        nfa.add_transition(m.from, m.profile[i] + na * g.obs(m.to, i), m.to);
    }
    let d = nfa.determinize().minimize();
    let live: Vec<usize> = (0..d.num_states()).filter(|&q| d.accepting[q]).collect();
    let mut id = vec![usize::MAX; d.num_states()];
    for (k, &q) in live.iter().enumerate() {
        id[q] = k;
    }
    let z = live.len();
    let mut need_z = false;
    let mut delta: Vec<Vec<Option<Vec<usize>>>> = live
        .iter()
        .map(|&q| {
            (0..na)
                .map(|a| {
                    let t: Vec<usize> = (0..nb).map(|x| id[d.next(q, a + na * x)]).collect();
                    if t.iter().all(|&x| x == usize::MAX) {
                        return None;
                    }
                    Some(
                        t.into_iter()
                            .map(|x| {
                                if x == usize::MAX {
                                    need_z = true;
                                    z
                                } else {
                                    x
                                }
                            })
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    let mut states: Vec<String> = live.iter().map(|&q| d.state_names[q].clone()).collect();
    if need_z {
        states.push("z".into());
        delta.push(vec![Some(vec![z; nb]); na]);
    }
    let initial = id[d.initial.expect("deterministic")];
    Process::new(states, g.actions(i).names().to_vec(), g.observations(i).names().to_vec(), initial, delta)
        .expect("localised automata are processes")
}

/// The largest number of targets of one (position, profile).
pub fn max_branching(g: &GameGraph) -> usize {
    (0..g.num_positions())
        .flat_map(|v| (0..g.num_profiles()).map(move |c| g.post(v, c).len()))
        .max()
        .unwrap_or(1)
        .max(1)
}

/// The game as a monitored architecture. The monitor runs on the positions; direction d
/// selects the d-th target (cyclically) of the current position and profile. The returned
/// specification reads global actions: the condition synchronised with the game.
pub fn game_to_arch(g: &GameGraph, w: &WinningCondition) -> Result<(MonitoredArchitecture, WinningCondition)> {
    if let Some(d) = validate_game(g).into_iter().next() {
        return Err(CoreError::Malformed(d.message).into());
    }
    let colors = w.over_game_colors(g)?;
    let n = g.players();
    let k = max_branching(g);
    let mut actions = vec![(0..k).map(|d| format!("d{d}")).collect::<Vec<_>>()];
    actions.extend((0..n).map(|i| g.actions(i).names().to_vec()));
    let sizes: Vec<usize> = actions.iter().map(|a| a.len()).collect();
    let total: usize = sizes.iter().product();
    let target = |v: usize, c: usize| {
        let gamma = decode(&sizes, c);
        let post = g.post(v, g.encode_profile(&gamma[1..]));
        post[gamma[0] % post.len()]
    };
    let beta = |v: usize| (0..n).map(|i| g.obs(v, i)).collect::<Vec<_>>();
    let delta: Vec<Vec<usize>> = (0..g.num_positions()).map(|v| (0..total).map(|c| target(v, c)).collect()).collect();
    let out = delta.iter().map(|row| row.iter().map(|&t| beta(t)).collect()).collect();
    let monitor = ViewMonitor::new(
        actions,
        (0..n).map(|i| g.observations(i).names().to_vec()).collect(),
        g.positions().names().to_vec(),
        g.initial(),
        beta(g.initial()),
        delta.clone(),
        out,
    )?;
    let processes = (0..n).map(|i| localized_process(g, i)).collect();
    let arch = MonitoredArchitecture::new(processes, monitor)?;

    let mut a = WordAutomaton::new(Mode::Parity, arch.monitor.letter_names(), 0);
    let q0 = w.step(w.initial(), colors[g.color(g.initial())]);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(g.initial(), q0)];
    index.insert((g.initial(), q0), 0);
    let mut k = 0;
    while k < order.len() {
        let (v, q) = order[k];
        a.add_state(format!("{}/{}", g.position_name(v), w.automaton.state_names[q]));
        a.priority[k] = w.priority(q);
        for c in 0..total {
            let t = delta[v][c];
            let key = (t, w.step(q, colors[g.color(t)]));
            if !index.contains_key(&key) {
                index.insert(key, order.len());
                order.push(key);
            }
        }
        k += 1;
    }
    for (s, &(v, q)) in order.iter().enumerate() {
        for c in 0..total {
            let t = delta[v][c];
            a.trans[s][c] = vec![index[&(t, w.step(q, colors[g.color(t)]))]];
        }
    }
    a.initial = Some(0);
    let spec = WinningCondition::new(w.kind, a)?;
    Ok((arch, spec))
}

/// `w` read over the monitor states of [`game_to_arch`], which are the positions of `g`.
pub fn condition_over_positions(g: &GameGraph, w: &WinningCondition) -> Result<WinningCondition> {
    let colors = w.over_game_colors(g)?;
    let map: Vec<ColorMap> = (0..g.num_positions()).map(|v| ColorMap::Letter(colors[g.color(v)])).collect();
    Ok(w.pullback(g.positions().names().to_vec(), &map))
}

/// Observation names of a history, one word per player.
pub fn observation_words(g: &GameGraph, path: &[usize]) -> Vec<Vec<String>> {
    (0..g.players())
        .map(|i| path.iter().map(|&v| g.observations(i).name(g.obs(v, i)).to_string()).collect())
        .collect()
}

/// Outcome of comparing a game with the game of its architecture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub depth: usize,
    /// Histories of the game, up to `depth` moves.
    pub histories: usize,
    /// Histories of the game of the architecture.
    pub translated: usize,
    /// Translated histories labelled like no history of the game, or like one already matched.
    pub mismatched: usize,
}

impl RoundTrip {
    pub fn is_bijection(&self) -> bool {
        self.mismatched == 0 && self.histories == self.translated
    }
}

type Labelled = (Vec<(Vec<String>, Vec<String>)>, Vec<usize>);

/// Histories labelled by the action names along the moves and the observation names of the
/// positions, together with the path mapped through `pos`. Also returns the number of
/// histories, which exceeds the set when `pos` merges two of them.
fn labelled(g: &GameGraph, depth: usize, limit: usize, pos: &dyn Fn(usize) -> usize) -> Result<(usize, BTreeSet<Labelled>)> {
    let obs = |v: usize| -> Vec<String> { (0..g.players()).map(|i| g.observations(i).name(g.obs(v, i)).to_string()).collect() };
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); g.num_positions()];
    for (k, m) in g.moves().iter().enumerate() {
        by_source[m.from].push(k);
    }
    let v0 = g.initial();
    let mut layer: Vec<(Vec<(Vec<String>, Vec<String>)>, Vec<usize>, usize)> = vec![(vec![(Vec::new(), obs(v0))], vec![pos(v0)], v0)];
    let mut all = BTreeSet::new();
    let mut count = 0;
    for step in 0..=depth {
        count += layer.len();
        for (h, p, _) in &layer {
            all.insert((h.clone(), p.clone()));
            if count > limit {
                return Err(cap("round-trip histories", limit));
            }
        }
        if step == depth {
            break;
        }
        let mut next = Vec::new();
        for (h, p, v) in &layer {
            for &k in &by_source[*v] {
                let m = &g.moves()[k];
                let acts = m.profile.iter().enumerate().map(|(i, &a)| g.actions(i).name(a).to_string()).collect();
                let mut h2 = h.clone();
                h2.push((acts, obs(m.to)));
                let mut p2 = p.clone();
                p2.push(pos(m.to));
                next.push((h2, p2, m.to));
            }
        }
        layer = next;
    }
    Ok((count, all))
}

/// Translates `g` to an architecture and back, with `w` read over the monitor states, and
/// matches the histories of both games by actions, observations and the position of `g`
/// behind each monitor state.
pub fn check_round_trip(g: &GameGraph, w: &WinningCondition, depth: usize, limit: usize) -> Result<RoundTrip> {
    let (arch, _) = game_to_arch(g, w)?;
    let spec = condition_over_positions(g, w)?;
    let ag = arch_to_game_reachable(&arch, &spec, limit)?;
    let (histories, ours) = labelled(g, depth, limit, &|v| v)?;
    let sink = g.num_positions();
    let (translated, theirs) = labelled(&ag.game, depth, limit, &|x| ag.origin[x].as_ref().map_or(sink, |o| o.monitor))?;
    let matched = theirs.iter().filter(|h| ours.contains(h)).count();
    Ok(RoundTrip { depth, histories, translated, mismatched: translated - matched })
}
