use std::collections::BTreeSet;

use hgame_core::{MealyMachine, MooreMachine};

use crate::error::{cap, ArchError, Result};
use crate::process::Process;
use crate::wiring::HardWired;

/// `(a,b,c)`; a single part is left alone.
pub fn tuple_name<S: AsRef<str>>(parts: &[S]) -> String {
    if parts.len() == 1 {
        return parts[0].as_ref().to_string();
    }
    let p: Vec<&str> = parts.iter().map(|s| s.as_ref()).collect();
    format!("({})", p.join(","))
}

/// Mixed-radix code, first component fastest.
pub fn encode(sizes: &[usize], parts: &[usize]) -> usize {
    let mut code = 0;
    for k in (0..sizes.len()).rev() {
        code = code * sizes[k] + parts[k];
    }
    code
}

pub fn decode(sizes: &[usize], mut code: usize) -> Vec<usize> {
    sizes
        .iter()
        .map(|&s| {
            let d = code % s;
            code /= s;
            d
        })
        .collect()
}

/// Mealy machine from global actions Γ = A^0 × A^1 × … × A^n to observation profiles
/// B^1 × … × B^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewMonitor {
    /// A^0 (Environment) first.
    pub actions: Vec<Vec<String>>,
    pub observations: Vec<Vec<String>>,
    pub states: Vec<String>,
    pub initial: usize,
    /// Observation profile of the initial position; never delivered to a process.
    pub initial_observation: Vec<usize>,
    /// `delta[m][γ]`
    pub delta: Vec<Vec<usize>>,
    /// `out[m][γ]`
    pub out: Vec<Vec<Vec<usize>>>,
}

impl ViewMonitor {
    pub fn new(
        actions: Vec<Vec<String>>,
        observations: Vec<Vec<String>>,
        states: Vec<String>,
        initial: usize,
        initial_observation: Vec<usize>,
        delta: Vec<Vec<usize>>,
        out: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let m = ViewMonitor { actions, observations, states, initial, initial_observation, delta, out };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let bad = |s: &str| Err(ArchError::MalformedMonitor(s.into()));
        if self.actions.len() != self.observations.len() + 1 {
            return bad("one action alphabet per process plus the Environment's");
        }
        if self.actions.iter().chain(&self.observations).any(|a| a.is_empty()) {
            return bad("empty alphabet");
        }
        let n = self.states.len();
        if n == 0 || self.initial >= n || self.delta.len() != n || self.out.len() != n {
            return bad("state count mismatch");
        }
        let ok_obs = |b: &Vec<usize>| {
            b.len() == self.observations.len() && b.iter().zip(&self.observations).all(|(&x, a)| x < a.len())
        };
        if !ok_obs(&self.initial_observation) {
            return bad("initial observation out of range");
        }
        let k = self.num_letters();
        for (row, orow) in self.delta.iter().zip(&self.out) {
            if row.len() != k || orow.len() != k {
                return bad("not total on the global actions");
            }
            if row.iter().any(|&t| t >= n) || !orow.iter().all(ok_obs) {
                return bad("index out of range");
            }
        }
        Ok(())
    }

    pub fn processes(&self) -> usize {
        self.observations.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn action_sizes(&self) -> Vec<usize> {
        self.actions.iter().map(|a| a.len()).collect()
    }

    pub fn observation_sizes(&self) -> Vec<usize> {
        self.observations.iter().map(|a| a.len()).collect()
    }

    /// |Γ|
    pub fn num_letters(&self) -> usize {
        self.actions.iter().map(|a| a.len()).product()
    }

    pub fn letter(&self, gamma: &[usize]) -> usize {
        encode(&self.action_sizes(), gamma)
    }

    pub fn profile(&self, code: usize) -> Vec<usize> {
        decode(&self.action_sizes(), code)
    }

    pub fn letter_name(&self, code: usize) -> String {
        let p = self.profile(code);
        let parts: Vec<&str> = p.iter().enumerate().map(|(k, &a)| self.actions[k][a].as_str()).collect();
        tuple_name(&parts)
    }

    pub fn letter_names(&self) -> Vec<String> {
        (0..self.num_letters()).map(|c| self.letter_name(c)).collect()
    }

    pub fn observation_name(&self, b: &[usize]) -> String {
        let parts: Vec<&str> = b.iter().enumerate().map(|(i, &x)| self.observations[i][x].as_str()).collect();
        tuple_name(&parts)
    }

    pub fn step(&self, m: usize, code: usize) -> (usize, &[usize]) {
        (self.delta[m][code], &self.out[m][code])
    }

    /// The same monitor with `(m, last global action)` states, so that positions of the game
    /// determine the global action that led to them. State `(m, start)` is initial.
    pub fn with_action_memory(&self) -> (ViewMonitor, Vec<Option<usize>>) {
        let k = self.num_letters();
        let id = |m: usize, last: Option<usize>| m * (k + 1) + last.map_or(0, |c| c + 1);
        let mut states = Vec::new();
        let mut last = Vec::new();
        let mut delta = Vec::new();
        let mut out = Vec::new();
        for m in 0..self.num_states() {
            for l in std::iter::once(None).chain((0..k).map(Some)) {
                states.push(format!("{}@{}", self.states[m], l.map_or("start".to_string(), |c| self.letter_name(c))));
                last.push(l);
                delta.push((0..k).map(|c| id(self.delta[m][c], Some(c))).collect());
                out.push(self.out[m].clone());
            }
        }
        let mon = ViewMonitor {
            actions: self.actions.clone(),
            observations: self.observations.clone(),
            states,
            initial: id(self.initial, None),
            initial_observation: self.initial_observation.clone(),
            delta,
            out,
        };
        (mon, last)
    }

    /// The monitor as a plain Mealy machine over tuple-named letters.
    pub fn to_mealy(&self) -> Result<MealyMachine> {
        let sizes = self.observation_sizes();
        let total: usize = sizes.iter().product();
        let outputs = (0..total).map(|c| self.observation_name(&decode(&sizes, c))).collect();
        let out = self.out.iter().map(|row| row.iter().map(|b| encode(&sizes, b)).collect()).collect();
        Ok(MealyMachine::new(self.letter_names(), outputs, self.initial, self.delta.clone(), out)?)
    }
}

/// Processes P^1..P^n and a view monitor; the Environment is a black box over A^0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitoredArchitecture {
    pub processes: Vec<Process>,
    pub monitor: ViewMonitor,
    /// Set when the monitor realises a hard-wired communication graph.
    pub wiring: Option<HardWired>,
}

impl MonitoredArchitecture {
    pub fn new(processes: Vec<Process>, monitor: ViewMonitor) -> Result<Self> {
        let a = MonitoredArchitecture { processes, monitor, wiring: None };
        a.check()?;
        Ok(a)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.processes.len();
        if n == 0 || self.monitor.processes() != n {
            return Err(ArchError::AlphabetMismatch(format!(
                "{} processes under a monitor for {}",
                n,
                self.monitor.processes()
            )));
        }
        for (i, p) in self.processes.iter().enumerate() {
            if p.actions != self.monitor.actions[i + 1] {
                return Err(ArchError::AlphabetMismatch(format!("actions of process {}", i + 1)));
            }
            if p.observations != self.monitor.observations[i] {
                return Err(ArchError::AlphabetMismatch(format!("observations of process {}", i + 1)));
            }
        }
        Ok(())
    }

    /// Every process a black box over the monitor's alphabets.
    pub fn black_boxes(monitor: ViewMonitor) -> Self {
        let processes = (0..monitor.processes())
            .map(|i| Process::black_box(monitor.actions[i + 1].clone(), monitor.observations[i].clone()))
            .collect();
        MonitoredArchitecture { processes, monitor, wiring: None }
    }

    pub fn players(&self) -> usize {
        self.processes.len()
    }

    /// Whether the word of global actions is a run prefix of the architecture.
    pub fn is_run(&self, word: &[usize]) -> bool {
        let mon = &self.monitor;
        let mut m = mon.initial;
        let mut q: Vec<usize> = self.processes.iter().map(|p| p.initial).collect();
        for &c in word {
            if c >= mon.num_letters() {
                return false;
            }
            let gamma = mon.profile(c);
            let (m2, b) = mon.step(m, c);
            for (i, p) in self.processes.iter().enumerate() {
                match p.step(q[i], gamma[i + 1], b[i]) {
                    Some(t) => q[i] = t,
                    None => return false,
                }
            }
            m = m2;
        }
        true
    }

    /// All run prefixes of length `depth` generated by the distributed program (or by the
    /// processes themselves when `programs` is `None`), as words of letter codes.
    pub fn runs(&self, programs: Option<&[MooreMachine]>, depth: usize, limit: usize) -> Result<BTreeSet<Vec<usize>>> {
        self.check()?;
        let n = self.players();
        if let Some(ps) = programs {
            if ps.len() != n {
                return Err(ArchError::AlphabetMismatch(format!("{} programs for {n} processes", ps.len())));
            }
            for (i, (s, p)) in ps.iter().zip(&self.processes).enumerate() {
                if s.output_names != p.actions || s.input_names != p.observations {
                    return Err(ArchError::AlphabetMismatch(format!("program of process {}", i + 1)));
                }
            }
        }
        let mon = &self.monitor;
        let init_s: Vec<usize> = programs.map_or(vec![0; n], |ps| ps.iter().map(|s| s.initial).collect());
        let init_q: Vec<usize> = self.processes.iter().map(|p| p.initial).collect();
        let mut layer: Vec<(Vec<usize>, usize, Vec<usize>, Vec<usize>)> = vec![(Vec::new(), mon.initial, init_q, init_s)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (word, m, q, s) in &layer {
                let choices: Vec<Vec<usize>> = (0..n)
                    .map(|i| match programs {
                        Some(ps) => vec![ps[i].out[s[i]]],
                        None => self.processes[i].enabled(q[i]),
                    })
                    .collect();
                let sizes: Vec<usize> = std::iter::once(mon.actions[0].len()).chain(choices.iter().map(|c| c.len())).collect();
                for pick in hgame_core::game::all_profiles(&sizes) {
                    let gamma: Vec<usize> =
                        std::iter::once(pick[0]).chain((0..n).map(|i| choices[i][pick[i + 1]])).collect();
                    let c = mon.letter(&gamma);
                    let (m2, b) = mon.step(*m, c);
                    let mut q2 = Vec::with_capacity(n);
                    for i in 0..n {
                        match self.processes[i].step(q[i], gamma[i + 1], b[i]) {
                            Some(t) => q2.push(t),
                            None => {
                                return Err(ArchError::MalformedProcess(format!(
                                    "program of process {} plays a disabled action",
                                    i + 1
                                )))
                            }
                        }
                    }
                    let s2: Vec<usize> = match programs {
                        Some(ps) => (0..n).map(|i| ps[i].step(s[i], b[i])).collect(),
                        None => s.clone(),
                    };
                    let mut w = word.clone();
                    w.push(c);
                    next.push((w, m2, q2, s2));
                    if next.len() > limit {
                        return Err(cap("run prefixes", limit));
                    }
                }
            }
            layer = next;
        }
        Ok(layer.into_iter().map(|x| x.0).collect())
    }
}
