//! Games with hierarchical observation as pipelines. Stage k of the pipeline runs the k-th
//! player of the order; the Environment announces the next observation of the first player
//! together with its direction, and every process forwards the observation of the next
//! player as its signal. Process k therefore lags k−1 rounds behind, and the specification
//! reassembles the source rounds from the shifted actions. An announcement that contradicts
//! the moves is a lie of the Environment and satisfies the specification.

use std::collections::{HashMap, VecDeque};

use hgame_core::automaton::{Mode, WordAutomaton};
use hgame_core::game::reachable_positions;
use hgame_core::{GameGraph, WinningCondition};

use crate::error::{cap, ArchError, Result};
use crate::monitor::{encode, MonitoredArchitecture};
use crate::process::Process;
use crate::translate::game_to_arch;
use crate::wiring::{HardWired, SignalAlphabet};

#[derive(Clone, Debug)]
pub struct Sequentialized {
    pub pipeline: MonitoredArchitecture,
    pub spec: WinningCondition,
    /// Players from most to least informed.
    pub order: Vec<usize>,
    /// The architecture of the game before sequentialisation.
    pub source: MonitoredArchitecture,
    /// `factors[k]` maps observations of `order[k]` to those of `order[k+1]`.
    pub factors: Vec<Vec<usize>>,
}

/// Maps f with β^{order[k+1]} = f ∘ β^{order[k]} on reachable positions. Observations that
/// never occur map to 0.
pub fn chain_factors(g: &GameGraph, order: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = g.players();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(ArchError::AlphabetMismatch(format!("{order:?} is not an order of the {n} players")));
    }
    let reach = reachable_positions(g);
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let (i, j) = (order[k], order[k + 1]);
        let mut f: Vec<Option<(usize, usize)>> = vec![None; g.observations(i).len()];
        for v in (0..g.num_positions()).filter(|&v| reach[v]) {
            match f[g.obs(v, i)] {
                None => f[g.obs(v, i)] = Some((g.obs(v, j), v)),
                Some((b, u)) if b != g.obs(v, j) => {
                    return Err(ArchError::NotFactorable {
                        earlier: i + 1,
                        later: j + 1,
                        u: g.position_name(u).into(),
                        v: g.position_name(v).into(),
                    })
                }
                _ => {}
            }
        }
        out.push(f.into_iter().map(|x| x.map_or(0, |p| p.0)).collect());
    }
    Ok(out)
}

/// Tracking state of the sequentialised specification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PipeState {
    Lied,
    Track {
        position: usize,
        condition: usize,
        /// Incomplete source rounds, oldest first: direction, announcement, stage actions.
        pending: Vec<(usize, usize, Vec<usize>)>,
        rounds: usize,
    },
}

struct Ctx<'a> {
    g: &'a GameGraph,
    w: &'a WinningCondition,
    colors: Vec<usize>,
    lied: u32,
    order: &'a [usize],
    stages: Vec<SignalAlphabet>,
    source: &'a MonitoredArchitecture,
}

impl Ctx<'_> {
    fn step(&self, s: &PipeState, letter: usize) -> PipeState {
        let PipeState::Track { position, condition, pending, rounds } = s else {
            return PipeState::Lied;
        };
        let n = self.order.len();
        let sizes: Vec<usize> = self.stages.iter().map(|s| s.len()).collect();
        let acts = crate::monitor::decode(&sizes, letter);
        let mut pending = pending.clone();
        let env = &self.stages[0];
        pending.push((env.control_of(acts[0]), env.signal_of(acts[0]), Vec::new()));
        let len = pending.len();
        for k in 1..=n {
            // stage k plays for the source round `rounds - (k - 1)`
            if *rounds + 1 >= k {
                pending[len - k].2.push(self.stages[k].control_of(acts[k]));
            }
        }
        let (mut v, mut q) = (*position, *condition);
        if pending[0].2.len() == n {
            let (d, ann, a) = pending.remove(0);
            let mut gamma = vec![0; n + 1];
            gamma[0] = d;
            for (k, &x) in a.iter().enumerate() {
                gamma[self.order[k] + 1] = x;
            }
            v = self.source.monitor.delta[v][self.source.monitor.letter(&gamma)];
            if self.g.obs(v, self.order[0]) != ann {
                return PipeState::Lied;
            }
            q = self.w.step(q, self.colors[self.g.color(v)]);
        }
        PipeState::Track { position: v, condition: q, pending, rounds: (*rounds + 1).min(n) }
    }

    fn priority(&self, s: &PipeState) -> u32 {
        match s {
            PipeState::Lied => self.lied,
            PipeState::Track { condition, .. } => self.w.priority(*condition),
        }
    }
}

/// Largest even priority of the condition, so that its kind is kept.
fn lied_priority(w: &WinningCondition) -> u32 {
    let top = w.automaton.priority.iter().copied().max().unwrap_or(0);
    top & !1
}

fn stages(g: &GameGraph, order: &[usize], directions: &[String]) -> Vec<SignalAlphabet> {
    let n = order.len();
    let obs = |k: usize| g.observations(order[k]).names().to_vec();
    let mut out = vec![SignalAlphabet::new(directions.to_vec(), obs(0))];
    for k in 0..n {
        let signals = if k + 1 < n { obs(k + 1) } else { vec!["-".into()] };
        out.push(SignalAlphabet::new(g.actions(order[k]).names().to_vec(), signals));
    }
    out
}

/// Stage k (1-based) of the pipeline: the process of player `order[k-1]` that emits the
/// observation of the next player, ignoring the k−1 observations it receives before its
/// true input arrives.
fn pipeline_process(p: &Process, stage: &SignalAlphabet, k: usize, f: Option<&[usize]>, c0: usize) -> Process {
    let nb = p.observations.len();
    let next_signal = |b: usize| f.map_or(0, |f| f[b]);
    let start = (k - 1, p.initial, c0);
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (j, q, c) = states[i];
        let mut row: Vec<Option<Vec<usize>>> = vec![None; stage.len()];
        for x in 0..stage.control.len() {
            if j == 0 && p.delta[q][x].is_none() {
                continue;
            }
            let mut t = Vec::with_capacity(nb);
            for b in 0..nb {
                let s = if j > 0 { (j - 1, q, next_signal(b)) } else { (0, p.step(q, x, b).expect("enabled"), next_signal(b)) };
                let id = *index.entry(s).or_insert_with(|| {
                    states.push(s);
                    states.len() - 1
                });
                t.push(id);
            }
            row[stage.action(x, c)] = Some(t);
        }
        delta.push(row);
        i += 1;
    }
    let names = states
        .iter()
        .map(|&(j, q, c)| format!("{j}/{}/{}", p.states[q], stage.signals[c]))
        .collect();
    Process::new(names, stage.action_names(), p.observations.clone(), 0, delta).expect("pipeline processes are well formed")
}

/// Reduction of a game with hierarchical observation in `order` to a pipeline.
pub fn sequentialize_pipeline(g: &GameGraph, order: &[usize], w: &WinningCondition, limit: usize) -> Result<Sequentialized> {
    let factors = chain_factors(g, order)?;
    let (source, _) = game_to_arch(g, w)?;
    let n = order.len();
    let st = stages(g, order, &source.monitor.actions[0]);
    let wiring = HardWired::pipeline(st.clone())?;
    let v0 = g.initial();
    let processes: Vec<Process> = (1..=n)
        .map(|k| {
            let f = factors.get(k - 1).map(|f| f.as_slice());
            let c0 = f.map_or(0, |f| f[g.obs(v0, order[k - 1])]);
            pipeline_process(&source.processes[order[k - 1]], &st[k], k, f, c0)
        })
        .collect();
    let monitor = wiring.monitor();
    let mut pipeline = MonitoredArchitecture::new(processes, monitor)?;
    pipeline.wiring = Some(wiring);

    let ctx = Ctx { g, w, colors: w.over_game_colors(g)?, lied: lied_priority(w), order, stages: st, source: &source };
    let letters = pipeline.monitor.letter_names();
    let start = PipeState::Track {
        position: v0,
        condition: w.step(w.initial(), ctx.colors[g.color(v0)]),
        pending: Vec::new(),
        rounds: 0,
    };
    let mut index: HashMap<PipeState, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters.len());
        for c in 0..letters.len() {
            let t = ctx.step(&states[s], c);
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= limit {
                        return Err(cap("pipeline specification states", limit));
                    }
                    states.push(t.clone());
                    index.insert(t, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            row.push(id);
        }
        trans.push(row);
    }
    let mut a = WordAutomaton::new(Mode::Parity, letters, states.len());
    for (s, st) in states.iter().enumerate() {
        a.state_names[s] = match st {
            PipeState::Lied => "lied".into(),
            PipeState::Track { position, condition, pending, .. } => {
                format!("{}/{}/{}", g.position_name(*position), w.automaton.state_names[*condition], pending.len())
            }
        };
        a.priority[s] = ctx.priority(st);
        a.trans[s] = trans[s].iter().map(|&t| vec![t]).collect();
    }
    let spec = WinningCondition::new(w.kind, a)?;
    Ok(Sequentialized { pipeline, spec, order: order.to_vec(), source, factors })
}

impl Sequentialized {
    /// The pipeline run of the source run `alpha` (letters of the source architecture),
    /// `len` rounds long: stage k plays its source action of k−1 rounds earlier, filler
    /// control 0 before that, and every stage forwards the observation it holds.
    pub fn pipe(&self, g: &GameGraph, alpha: &[usize], len: usize) -> Vec<usize> {
        assert!(len <= alpha.len(), "pipe needs the source rounds it shifts");
        let n = self.order.len();
        let src = &self.source.monitor;
        let mut v = vec![g.initial()];
        for &c in alpha {
            v.push(src.delta[*v.last().expect("nonempty")][c]);
        }
        let stages = &self.pipeline.wiring.as_ref().expect("pipelines are wired").stages;
        let sizes: Vec<usize> = stages.iter().map(|s| s.len()).collect();
        (0..len)
            .map(|t| {
                let gamma_t = src.profile(alpha[t]);
                let mut acts = vec![stages[0].action(gamma_t[0], g.obs(v[t + 1], self.order[0]))];
                for k in 1..=n {
                    let x = if t + 1 >= k { src.profile(alpha[t + 1 - k])[self.order[k - 1] + 1] } else { 0 };
                    let y = if k < n { g.obs(v[(t + 1).saturating_sub(k)], self.order[k]) } else { 0 };
                    acts.push(stages[k].action(x, y));
                }
                encode(&sizes, &acts)
            })
            .collect()
    }

    /// Source positions reassembled by the specification along a pipeline word, `None` once
    /// the Environment has lied.
    pub fn tracked_positions(&self, g: &GameGraph, w: &WinningCondition, word: &[usize]) -> Result<Option<Vec<usize>>> {
        let st = self.pipeline.wiring.as_ref().expect("pipelines are wired").stages.clone();
        let ctx = Ctx {
            g,
            w,
            colors: w.over_game_colors(g)?,
            lied: lied_priority(w),
            order: &self.order,
            stages: st,
            source: &self.source,
        };
        let mut s = PipeState::Track {
            position: g.initial(),
            condition: w.step(w.initial(), ctx.colors[g.color(g.initial())]),
            pending: Vec::new(),
            rounds: 0,
        };
        let mut out = vec![g.initial()];
        for &c in word {
            let before = match &s {
                PipeState::Track { pending, .. } => pending.len(),
                PipeState::Lied => return Ok(None),
            };
            s = ctx.step(&s, c);
            match &s {
                PipeState::Lied => return Ok(None),
                PipeState::Track { position, pending, .. } => {
                    if pending.len() <= before {
                        out.push(*position);
                    }
                }
            }
        }
        Ok(Some(out))
    }
}
