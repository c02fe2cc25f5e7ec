//! Hard-wired architectures: actions split into a control symbol and a communication signal,
//! and a fixed graph saying who receives whose signal.

use std::collections::HashMap;

use hgame_core::MooreMachine;

use crate::error::{ArchError, Result};
use crate::monitor::{decode, encode, tuple_name, MonitoredArchitecture, ViewMonitor};

/// Actions `X × Y`, code `x + |X|·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalAlphabet {
    pub control: Vec<String>,
    pub signals: Vec<String>,
}

impl SignalAlphabet {
    pub fn new(control: Vec<String>, signals: Vec<String>) -> Self {
        SignalAlphabet { control, signals }
    }

    /// No control component.
    pub fn signals(signals: Vec<String>) -> Self {
        SignalAlphabet { control: vec!["-".into()], signals }
    }

    pub fn len(&self) -> usize {
        self.control.len() * self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn action(&self, x: usize, y: usize) -> usize {
        x + self.control.len() * y
    }

    pub fn control_of(&self, a: usize) -> usize {
        a % self.control.len()
    }

    pub fn signal_of(&self, a: usize) -> usize {
        a / self.control.len()
    }

    pub fn action_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.len());
        for y in &self.signals {
            for x in &self.control {
                out.push(match (self.control.len(), self.signals.len()) {
                    (1, _) => y.clone(),
                    (_, 1) => x.clone(),
                    _ => format!("{x}:{y}"),
                });
            }
        }
        out
    }
}

/// Stage 0 is the Environment; `(j, i)` delivers the signal of j to process i ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardWired {
    pub stages: Vec<SignalAlphabet>,
    pub links: Vec<(usize, usize)>,
}

impl HardWired {
    pub fn new(stages: Vec<SignalAlphabet>, mut links: Vec<(usize, usize)>) -> Result<Self> {
        let n = stages.len().saturating_sub(1);
        if n == 0 {
            return Err(ArchError::MalformedMonitor("a wiring needs at least one process".into()));
        }
        if stages.iter().any(|s| s.is_empty()) {
            return Err(ArchError::MalformedMonitor("empty signal alphabet".into()));
        }
        if let Some(&(j, i)) = links.iter().find(|&&(j, i)| j > n || i == 0 || i > n) {
            return Err(ArchError::MalformedMonitor(format!("link {j} -> {i} is out of range")));
        }
        links.sort_unstable();
        links.dedup();
        Ok(HardWired { stages, links })
    }

    /// Environment → 1 → 2 → … → n.
    pub fn pipeline(stages: Vec<SignalAlphabet>) -> Result<Self> {
        let n = stages.len().saturating_sub(1);
        HardWired::new(stages, (0..n).map(|k| (k, k + 1)).collect())
    }

    pub fn processes(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn is_pipeline(&self) -> bool {
        let n = self.processes();
        self.links.len() == n && self.links.iter().enumerate().all(|(k, &l)| l == (k, k + 1))
    }

    /// Senders whose signals process `i` (1-based) receives, ascending.
    pub fn senders(&self, i: usize) -> Vec<usize> {
        self.links.iter().filter(|l| l.1 == i).map(|l| l.0).collect()
    }

    fn observation_sizes(&self, i: usize) -> Vec<usize> {
        self.senders(i).iter().map(|&j| self.stages[j].signals.len()).collect()
    }

    /// Tuples of received signals; `-` when nothing is received.
    pub fn observation_names(&self, i: usize) -> Vec<String> {
        let from = self.senders(i);
        let sizes = self.observation_sizes(i);
        let total: usize = sizes.iter().product();
        (0..total)
            .map(|c| {
                if from.is_empty() {
                    return "-".to_string();
                }
                let ys = decode(&sizes, c);
                let parts: Vec<&str> = from.iter().zip(&ys).map(|(&j, &y)| self.stages[j].signals[y].as_str()).collect();
                tuple_name(&parts)
            })
            .collect()
    }

    /// Observation of process `i` given the signal of every stage.
    pub fn observe(&self, i: usize, signal: &[usize]) -> usize {
        let ys: Vec<usize> = self.senders(i).iter().map(|&j| signal[j]).collect();
        encode(&self.observation_sizes(i), &ys)
    }

    /// The one-state monitor of the graph.
    pub fn monitor(&self) -> ViewMonitor {
        let n = self.processes();
        let actions: Vec<Vec<String>> = self.stages.iter().map(|s| s.action_names()).collect();
        let observations: Vec<Vec<String>> = (1..=n).map(|i| self.observation_names(i)).collect();
        let sizes: Vec<usize> = actions.iter().map(|a| a.len()).collect();
        let total: usize = sizes.iter().product();
        let out: Vec<Vec<usize>> = (0..total)
            .map(|c| {
                let gamma = decode(&sizes, c);
                let signal: Vec<usize> = gamma.iter().enumerate().map(|(k, &a)| self.stages[k].signal_of(a)).collect();
                (1..=n).map(|i| self.observe(i, &signal)).collect()
            })
            .collect();
        ViewMonitor {
            actions,
            observations,
            states: vec!["m".into()],
            initial: 0,
            initial_observation: vec![0; n],
            delta: vec![vec![0; total]],
            out: vec![out],
        }
    }

    /// Process j additionally receives the input of every later process, that is the
    /// signals of stages j, …, n−1.
    pub fn with_feedback(&self) -> Result<HardWired> {
        if !self.is_pipeline() {
            return Err(ArchError::NotPipeline(format!("links {:?}", self.links)));
        }
        let n = self.processes();
        let links = (1..=n).flat_map(|j| (j - 1..n).map(move |k| (k, j))).collect();
        HardWired::new(self.stages.clone(), links)
    }
}

/// Architecture of black-box processes on the graph.
pub fn wired_architecture(w: &HardWired) -> MonitoredArchitecture {
    let mut a = MonitoredArchitecture::black_boxes(w.monitor());
    a.wiring = Some(w.clone());
    a
}

/// The one-state pipeline monitor.
pub fn pipeline_monitor(stages: Vec<SignalAlphabet>) -> Result<ViewMonitor> {
    Ok(HardWired::pipeline(stages)?.monitor())
}

/// For each process, new observation id → old observation id when moving from the pipeline
/// `w` to its feedback version: the old observation is the first received component.
fn feedback_projection(w: &HardWired) -> Vec<Vec<usize>> {
    (1..=w.processes())
        .map(|j| {
            let k = w.stages[j - 1].signals.len();
            (0..k * feedback_extra(w, j)).map(|c| c % k).collect()
        })
        .collect()
}

fn feedback_extra(w: &HardWired, j: usize) -> usize {
    (j..w.processes()).map(|k| w.stages[k].signals.len()).product()
}

/// Adds the links i → j for j < i: processes keep their behaviour and ignore the new signals.
pub fn add_feedback_links(arch: &MonitoredArchitecture) -> Result<MonitoredArchitecture> {
    let w = arch.wiring.as_ref().ok_or_else(|| ArchError::NotPipeline("the monitor is not hard-wired".into()))?;
    let fw = w.with_feedback()?;
    let proj = feedback_projection(w);
    let processes = arch
        .processes
        .iter()
        .enumerate()
        .map(|(i, p)| p.precompose(fw.observation_names(i + 1), &proj[i]))
        .collect();
    let out = MonitoredArchitecture { processes, monitor: fw.monitor(), wiring: Some(fw) };
    out.check()?;
    Ok(out)
}

/// Programs of the pipeline `w`, reading the feedback observations and ignoring the links.
pub fn lift_programs(w: &HardWired, programs: &[MooreMachine]) -> Result<Vec<MooreMachine>> {
    let fw = w.with_feedback()?;
    let proj = feedback_projection(w);
    Ok(programs
        .iter()
        .enumerate()
        .map(|(i, m)| m.precompose(fw.observation_names(i + 1), &proj[i]))
        .collect())
}

/// Programs for the pipeline `w` running the same global runs as `programs` do on the
/// feedback version: process i simulates the programs of i, …, n, whose inputs it can
/// compute from its own input and the simulated outputs.
pub fn collapse_feedback(w: &HardWired, programs: &[MooreMachine]) -> Result<Vec<MooreMachine>> {
    let fw = w.with_feedback()?;
    let n = w.processes();
    if programs.len() != n {
        return Err(ArchError::AlphabetMismatch(format!("{} programs for {n} processes", programs.len())));
    }
    for (i, m) in programs.iter().enumerate() {
        if m.input_names != fw.observation_names(i + 1) || m.output_names != w.stages[i + 1].action_names() {
            return Err(ArchError::AlphabetMismatch(format!("program of process {}", i + 1)));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let inputs = w.observation_names(i);
        let start: Vec<usize> = (i..=n).map(|k| programs[k - 1].initial).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut states = vec![start];
        let mut delta = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let st = states[k].clone();
            let mut signal = vec![0; n + 1];
            for m in i..=n {
                signal[m] = w.stages[m].signal_of(programs[m - 1].out[st[m - i]]);
            }
            let mut row = Vec::with_capacity(inputs.len());
            for y in 0..inputs.len() {
                signal[i - 1] = y;
                let next: Vec<usize> =
                    (i..=n).map(|m| programs[m - 1].step(st[m - i], fw.observe(m, &signal))).collect();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        states.push(next.clone());
                        index.insert(next, states.len() - 1);
                        states.len() - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            k += 1;
        }
        let outs = states.iter().map(|st| programs[i - 1].out[st[0]]).collect();
        let m = MooreMachine::new(inputs, w.stages[i].action_names(), 0, delta, outs)?;
        out.push(m.minimize());
    }
    Ok(out)
}
