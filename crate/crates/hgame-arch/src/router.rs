//! Routed architectures: every action carries addressed signals, and a router monitor
//! delivers or denies each of them so that the induced game keeps hierarchical information.
//! When no admissible delivery does, the router panics and delivers everything from then on.
//!
//! The observation of process i names, in order, the bodies received from every other stage
//! (`-` when nothing arrives), the delivery flag of each signal it sent (`1` delivered, `0`
//! denied, `-` not sent) and the panic flag, as `recv|flags|ok` or `recv|flags|P`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use hgame_core::{GameBuilder, GameGraph};
use hgame_hierarchy::non_hierarchy_product;

use crate::error::{cap, ArchError, Result};
use crate::monitor::{encode, MonitoredArchitecture, ViewMonitor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedSignal {
    pub body: String,
    /// 1-based process id.
    pub receiver: usize,
    pub priority: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedAction {
    pub control: String,
    pub signals: Vec<RoutedSignal>,
}

/// Priority of a set of delivered signals, given by `(sender, receiver, priority)` headers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aggregation {
    /// Sum of priorities; ties broken by sender (lower ids weigh more), then receiver.
    Sum,
    Table(Vec<AggregationEntry>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregationEntry {
    pub signals: Vec<Header>,
    pub value: u64,
}

pub type Header = (usize, usize, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedArchitecture {
    /// `actions[0]` belongs to the Environment, `actions[i]` to process i.
    pub actions: Vec<Vec<RoutedAction>>,
    pub max_priority: u32,
    pub aggregation: Aggregation,
}

/// One emitted signal of a global action.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Emitted {
    sender: usize,
    receiver: usize,
    priority: u32,
    body: String,
}

impl RoutedArchitecture {
    pub fn new(actions: Vec<Vec<RoutedAction>>, max_priority: u32, aggregation: Aggregation) -> Result<Self> {
        let r = RoutedArchitecture { actions, max_priority, aggregation };
        r.check()?;
        Ok(r)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.processes();
        let bad = |m: String| Err(ArchError::MalformedRoute(m));
        if n == 0 {
            return bad("a routed architecture needs a process".into());
        }
        for (j, acts) in self.actions.iter().enumerate() {
            if acts.is_empty() {
                return bad(format!("stage {j} has no action"));
            }
            let names: BTreeSet<&str> = acts.iter().map(|a| a.control.as_str()).collect();
            if names.len() != acts.len() {
                return bad(format!("stage {j} repeats a control symbol"));
            }
            for a in acts {
                let mut seen = BTreeSet::new();
                for s in &a.signals {
                    if s.receiver == 0 || s.receiver > n || s.receiver == j {
                        return bad(format!("action {} of stage {j} addresses {}", a.control, s.receiver));
                    }
                    if !seen.insert(s.receiver) {
                        return bad(format!("action {} of stage {j} addresses {} twice", a.control, s.receiver));
                    }
                    if s.priority > self.max_priority {
                        return bad(format!("priority {} above the maximum {}", s.priority, self.max_priority));
                    }
                    if j == 0 && s.priority != self.max_priority {
                        return bad("Environment signals carry the top priority".into());
                    }
                    if s.body == "-" || s.body.contains(['|', ',']) {
                        return bad(format!("signal body `{}` is reserved", s.body));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn processes(&self) -> usize {
        self.actions.len().saturating_sub(1)
    }

    /// Code of a global action, as the monitors read it.
    pub fn letter(&self, gamma: &[usize]) -> usize {
        encode(&self.sizes(), gamma)
    }

    fn sizes(&self) -> Vec<usize> {
        self.actions.iter().map(|a| a.len()).collect()
    }

    /// Signals of a global action, by sender then receiver.
    fn emitted(&self, gamma: &[usize]) -> Vec<Emitted> {
        let mut out: Vec<Emitted> = gamma
            .iter()
            .enumerate()
            .flat_map(|(j, &a)| {
                self.actions[j][a].signals.iter().map(move |s| Emitted {
                    sender: j,
                    receiver: s.receiver,
                    priority: s.priority,
                    body: s.body.clone(),
                })
            })
            .collect();
        out.sort_by_key(|e| (e.sender, e.receiver));
        out
    }

    fn value(&self, emitted: &[Emitted], delivered: u64) -> Result<(u64, u64)> {
        let len = emitted.len();
        match &self.aggregation {
            Aggregation::Sum => {
                let mut sum = 0u64;
                let mut mask = 0u64;
                for (k, e) in emitted.iter().enumerate() {
                    if delivered >> k & 1 == 1 {
                        sum += u64::from(e.priority);
                        mask |= 1 << (len - 1 - k);
                    }
                }
                Ok((sum, mask))
            }
            Aggregation::Table(entries) => {
                let key = headers(emitted, delivered);
                entries
                    .iter()
                    .find(|e| sorted(&e.signals) == key)
                    .map(|e| (e.value, 0))
                    .ok_or_else(|| ArchError::Aggregation(format!("no entry for {key:?}")))
            }
        }
    }

    /// Table-wide monotonicity; totality and a unique maximum are checked per global action.
    fn check_table(&self) -> Result<()> {
        let Aggregation::Table(entries) = &self.aggregation else {
            return Ok(());
        };
        let sets: Vec<(BTreeSet<Header>, u64)> =
            entries.iter().map(|e| (e.signals.iter().copied().collect(), e.value)).collect();
        for (k, (a, _)) in sets.iter().enumerate() {
            if sets[..k].iter().any(|(b, _)| b == a) {
                return Err(ArchError::Aggregation(format!("duplicate entry for {a:?}")));
            }
        }
        for (a, x) in &sets {
            for (b, y) in &sets {
                if a.is_subset(b) && x > y {
                    return Err(ArchError::Aggregation(format!("not monotone: {a:?} exceeds {b:?}")));
                }
            }
        }
        Ok(())
    }
}

fn headers(emitted: &[Emitted], delivered: u64) -> Vec<Header> {
    let h: Vec<Header> = emitted
        .iter()
        .enumerate()
        .filter(|(k, _)| delivered >> k & 1 == 1)
        .map(|(_, e)| (e.sender, e.receiver, e.priority))
        .collect();
    sorted(&h)
}

fn sorted(h: &[Header]) -> Vec<Header> {
    let mut h = h.to_vec();
    h.sort_unstable();
    h
}

fn observation(n: usize, i: usize, emitted: &[Emitted], delivered: u64, panic: bool) -> String {
    let mut recv = vec!["-".to_string(); n + 1];
    let mut flags = vec!["-"; n + 1];
    for (k, e) in emitted.iter().enumerate() {
        let ok = delivered >> k & 1 == 1;
        if e.receiver == i && ok {
            recv[e.sender] = e.body.clone();
        }
        if e.sender == i {
            flags[e.receiver] = if ok { "1" } else { "0" };
        }
    }
    let recv: Vec<String> = (0..=n).filter(|&j| j != i).map(|j| recv[j].clone()).collect();
    let flags: Vec<&str> = (1..=n).filter(|&r| r != i).map(|r| flags[r]).collect();
    format!("{}|{}|{}", recv.join(","), flags.join(","), if panic { "P" } else { "ok" })
}

/// Everything the router may deliver at one global action, best first.
struct Choices {
    emitted: Vec<Emitted>,
    /// Admissible delivery masks, by decreasing aggregate.
    ranked: Vec<u64>,
}

fn choices(r: &RoutedArchitecture, gamma: &[usize]) -> Result<Choices> {
    let emitted = r.emitted(gamma);
    if emitted.len() > 20 {
        return Err(cap("signals per global action", 20));
    }
    let all = (1u64 << emitted.len()) - 1;
    let top: u64 = emitted
        .iter()
        .enumerate()
        .filter(|(_, e)| e.priority == r.max_priority)
        .map(|(k, _)| 1u64 << k)
        .sum();
    let mut scored = Vec::new();
    for d in 0..=all {
        if d & top == top {
            scored.push((r.value(&emitted, d)?, d));
        }
    }
    scored.sort_by(|a, b| b.cmp(a));
    if let Some(w) = scored.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(ArchError::Aggregation(format!(
            "{:?} and {:?} aggregate equally",
            headers(&emitted, w[0].1),
            headers(&emitted, w[1].1)
        )));
    }
    for (k, &(x, d)) in scored.iter().enumerate() {
        for &(y, e) in &scored[k + 1..] {
            if d & e == d && x > y {
                return Err(ArchError::Aggregation(format!("not monotone on {:?}", headers(&emitted, e))));
            }
        }
    }
    Ok(Choices { emitted, ranked: scored.into_iter().map(|x| x.1).collect() })
}

pub const INIT: &str = "init";
pub const PANIC: &str = "panic";

/// Router monitor together with the candidate game it supervises.
#[derive(Clone, Debug)]
pub struct Router {
    pub monitor: ViewMonitor,
    pub panic_state: usize,
    /// Every observation profile an admissible delivery produces; all moves allowed.
    pub candidates: GameGraph,
}

fn observation_alphabets(r: &RoutedArchitecture, all: &[Choices]) -> Vec<Vec<String>> {
    let n = r.processes();
    (1..=n)
        .map(|i| {
            let mut names = BTreeSet::new();
            for c in all {
                for &d in &c.ranked {
                    names.insert(observation(n, i, &c.emitted, d, false));
                }
                let full = (1u64 << c.emitted.len()) - 1;
                names.insert(observation(n, i, &c.emitted, full, true));
            }
            std::iter::once(INIT.to_string()).chain(names).collect()
        })
        .collect()
}

fn profile_name(p: &[String]) -> String {
    crate::monitor::tuple_name(p)
}

/// The game whose positions are observation profiles of admissible deliveries (panic flag
/// down), any of which may follow any other.
fn candidate_game(r: &RoutedArchitecture, all: &[Choices]) -> Result<GameGraph> {
    let n = r.processes();
    let mut b = GameBuilder::new(n);
    for i in 0..n {
        for a in &r.actions[i + 1] {
            b.action(i, &a.control);
        }
    }
    let init = b.add_position(INIT, &vec![INIT; n], Some("-"));
    let mut targets: BTreeMap<Vec<usize>, BTreeSet<String>> = BTreeMap::new();
    let sizes = r.sizes();
    let mut profiles: Vec<(String, Vec<String>)> = Vec::new();
    for (code, c) in all.iter().enumerate() {
        let gamma = crate::monitor::decode(&sizes, code);
        for &d in &c.ranked {
            let obs: Vec<String> = (1..=n).map(|i| observation(n, i, &c.emitted, d, false)).collect();
            let name = profile_name(&obs);
            targets.entry(gamma[1..].to_vec()).or_default().insert(name.clone());
            profiles.push((name, obs));
        }
    }
    profiles.sort();
    profiles.dedup();
    let mut ids: Vec<usize> = vec![init];
    for (name, obs) in &profiles {
        ids.push(b.add_position(name, obs, Some("-")));
    }
    for &from in &ids {
        for (profile, tos) in &targets {
            for t in tos {
                let to = b.position_id(t).expect("added");
                b.add_move(from, profile.clone(), to);
            }
        }
    }
    b.set_initial(init);
    Ok(b.build()?)
}

/// The router of `r`: its states supervise the candidate game with the deterministic
/// non-hierarchy automaton, and a panic sink delivers everything.
pub fn build_router(r: &RoutedArchitecture, limit: usize) -> Result<Router> {
    r.check()?;
    r.check_table()?;
    let n = r.processes();
    let sizes = r.sizes();
    let total: usize = sizes.iter().product();
    let all: Vec<Choices> = (0..total).map(|c| choices(r, &crate::monitor::decode(&sizes, c))).collect::<Result<_>>()?;
    let observations = observation_alphabets(r, &all);
    let obs_id: Vec<HashMap<&str, usize>> =
        observations.iter().map(|a| a.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect()).collect();
    let g = candidate_game(r, &all)?;
    let dfa = non_hierarchy_product(&g).determinize_capped(limit)?;
    let start = dfa.next(dfa.initial.expect("initial"), g.initial());

    let mut index: HashMap<usize, usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let deliver = |c: &Choices, d: u64, panic: bool| -> Vec<usize> {
        (1..=n).map(|i| obs_id[i - 1][observation(n, i, &c.emitted, d, panic).as_str()]).collect()
    };
    // The panic sink is numbered once every supervised state is known.
    let mut panic_rows: Vec<(usize, usize)> = Vec::new();
    while let Some(s) = queue.pop_front() {
        let q = states[s];
        let mut drow = Vec::with_capacity(total);
        let mut orow = Vec::with_capacity(total);
        for (code, c) in all.iter().enumerate() {
            let pick = c.ranked.iter().find_map(|&d| {
                let obs: Vec<String> = (1..=n).map(|i| observation(n, i, &c.emitted, d, false)).collect();
                let v = g.positions().get(&profile_name(&obs)).expect("candidate position");
                let q2 = dfa.next(q, v);
                (!dfa.accepting[q2]).then_some((d, q2))
            });
            match pick {
                Some((d, q2)) => {
                    let id = match index.get(&q2) {
                        Some(&id) => id,
                        None => {
                            if states.len() >= limit {
                                return Err(cap("router states", limit));
                            }
                            states.push(q2);
                            index.insert(q2, states.len() - 1);
                            queue.push_back(states.len() - 1);
                            states.len() - 1
                        }
                    };
                    drow.push(id);
                    orow.push(deliver(c, d, false));
                }
                None => {
                    panic_rows.push((s, code));
                    drow.push(usize::MAX);
                    orow.push(deliver(c, (1u64 << c.emitted.len()) - 1, true));
                }
            }
        }
        delta.push(drow);
        out.push(orow);
    }
    let panic_state = states.len();
    for (s, code) in panic_rows {
        delta[s][code] = panic_state;
    }
    delta.push(vec![panic_state; total]);
    out.push(all.iter().map(|c| deliver(c, (1u64 << c.emitted.len()) - 1, true)).collect());
    let mut names: Vec<String> = (0..states.len()).map(|k| format!("s{k}")).collect();
    names.push(PANIC.into());
    let monitor = ViewMonitor::new(
        r.actions.iter().map(|a| a.iter().map(|x| x.control.clone()).collect()).collect(),
        observations,
        names,
        0,
        vec![0; n],
        delta,
        out,
    )?;
    Ok(Router { monitor, panic_state, candidates: g })
}

/// One-state monitor delivering every emitted signal, over the router's alphabets.
pub fn full_delivery(r: &RoutedArchitecture) -> Result<ViewMonitor> {
    r.check()?;
    let n = r.processes();
    let sizes = r.sizes();
    let total: usize = sizes.iter().product();
    let all: Vec<Choices> = (0..total).map(|c| choices(r, &crate::monitor::decode(&sizes, c))).collect::<Result<_>>()?;
    let observations = observation_alphabets(r, &all);
    let out = all
        .iter()
        .map(|c| {
            let full = (1u64 << c.emitted.len()) - 1;
            (1..=n)
                .map(|i| {
                    let name = observation(n, i, &c.emitted, full, false);
                    observations[i - 1].iter().position(|x| *x == name).expect("admissible")
                })
                .collect()
        })
        .collect();
    ViewMonitor::new(
        r.actions.iter().map(|a| a.iter().map(|x| x.control.clone()).collect()).collect(),
        observations,
        vec!["m".into()],
        0,
        vec![0; n],
        vec![vec![0; total]],
        vec![out],
    )
}

impl Router {
    /// Black-box processes under the router.
    pub fn architecture(&self) -> MonitoredArchitecture {
        MonitoredArchitecture::black_boxes(self.monitor.clone())
    }

    /// Shortest word of global actions on which the router panics, if any.
    pub fn panic_word(&self) -> Option<Vec<usize>> {
        let m = &self.monitor;
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; m.num_states()];
        let mut seen = vec![false; m.num_states()];
        seen[m.initial] = true;
        let mut queue = VecDeque::from([m.initial]);
        while let Some(s) = queue.pop_front() {
            if s == self.panic_state {
                let mut word = Vec::new();
                let mut at = s;
                while let Some((p, c)) = prev[at] {
                    word.push(c);
                    at = p;
                }
                word.reverse();
                return Some(word);
            }
            for c in 0..m.num_letters() {
                let t = m.delta[s][c];
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((s, c));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Names of the observations delivered along a word of global actions.
    pub fn deliveries(&self, word: &[usize]) -> Vec<Vec<String>> {
        let m = &self.monitor;
        let mut s = m.initial;
        word.iter()
            .map(|&c| {
                let (t, b) = m.step(s, c);
                let names = b.iter().enumerate().map(|(i, &x)| m.observations[i][x].clone()).collect();
                s = t;
                names
            })
            .collect()
    }
}
