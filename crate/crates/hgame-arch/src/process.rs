use hgame_core::MooreMachine;

use crate::error::{ArchError, Result};

/// A process automaton: in state q it picks an enabled action a, receives an observation b
/// and moves to δ(q, a, b). Enabled actions are defined for every observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub observations: Vec<String>,
    pub initial: usize,
    /// `delta[q][a]` is `None` when `a` is disabled at `q`, else the successor per observation.
    pub delta: Vec<Vec<Option<Vec<usize>>>>,
}

impl Process {
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        observations: Vec<String>,
        initial: usize,
        delta: Vec<Vec<Option<Vec<usize>>>>,
    ) -> Result<Self> {
        let p = Process { states, actions, observations, initial, delta };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(ArchError::MalformedProcess(m));
        let n = self.states.len();
        if n == 0 || self.initial >= n || self.delta.len() != n {
            return bad("state count mismatch".into());
        }
        if self.actions.is_empty() || self.observations.is_empty() {
            return bad("empty action or observation alphabet".into());
        }
        for (q, row) in self.delta.iter().enumerate() {
            if row.len() != self.actions.len() {
                return bad(format!("state {} has {} action entries", self.states[q], row.len()));
            }
            if row.iter().all(|x| x.is_none()) {
                return bad(format!("no action is enabled at {}", self.states[q]));
            }
            for t in row.iter().flatten() {
                if t.len() != self.observations.len() {
                    return bad(format!("an enabled action at {} is not defined for every observation", self.states[q]));
                }
                if t.iter().any(|&x| x >= n) {
                    return bad("successor out of range".into());
                }
            }
        }
        Ok(())
    }

    /// One state, every action enabled.
    pub fn black_box(actions: Vec<String>, observations: Vec<String>) -> Self {
        let row = vec![Some(vec![0; observations.len()]); actions.len()];
        Process { states: vec!["*".into()], actions, observations, initial: 0, delta: vec![row] }
    }

    /// The white box running a program: exactly one action enabled per state.
    pub fn white_box(m: &MooreMachine) -> Self {
        let delta = (0..m.num_states())
            .map(|q| {
                let mut row = vec![None; m.output_names.len()];
                row[m.out[q]] = Some(m.delta[q].clone());
                row
            })
            .collect();
        Process {
            states: (0..m.num_states()).map(|q| format!("s{q}")).collect(),
            actions: m.output_names.clone(),
            observations: m.input_names.clone(),
            initial: m.initial,
            delta,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn enabled(&self, q: usize) -> Vec<usize> {
        (0..self.actions.len()).filter(|&a| self.delta[q][a].is_some()).collect()
    }

    pub fn step(&self, q: usize, a: usize, b: usize) -> Option<usize> {
        self.delta[q][a].as_ref().map(|t| t[b])
    }

    pub fn is_black_box(&self) -> bool {
        self.num_states() == 1 && self.delta[0].iter().all(|x| x.is_some())
    }

    pub fn is_white_box(&self) -> bool {
        self.delta.iter().all(|row| row.iter().filter(|x| x.is_some()).count() == 1)
    }

    /// Whether the action/observation sequence is a behaviour prefix of the process.
    pub fn accepts(&self, pairs: &[(usize, usize)]) -> bool {
        let mut q = self.initial;
        for &(a, b) in pairs {
            match self.step(q, a, b) {
                Some(t) => q = t,
                None => return false,
            }
        }
        true
    }

    /// Every behaviour of the program is one of the process (the program's actions and
    /// observations are matched by name).
    pub fn contains(&self, m: &MooreMachine) -> bool {
        let act: Option<Vec<usize>> =
            m.output_names.iter().map(|x| self.actions.iter().position(|y| y == x)).collect();
        let obs: Option<Vec<usize>> =
            m.input_names.iter().map(|x| self.observations.iter().position(|y| y == x)).collect();
        let (Some(act), Some(obs)) = (act, obs) else {
            return false;
        };
        let mut seen = vec![vec![false; self.num_states()]; m.num_states()];
        let mut stack = vec![(m.initial, self.initial)];
        seen[m.initial][self.initial] = true;
        while let Some((s, q)) = stack.pop() {
            let a = act[m.out[s]];
            for (x, &b) in obs.iter().enumerate() {
                let Some(t) = self.step(q, a, b) else {
                    return false;
                };
                let s2 = m.step(s, x);
                if !seen[s2][t] {
                    seen[s2][t] = true;
                    stack.push((s2, t));
                }
            }
        }
        true
    }

    /// The same process reading a new observation alphabet through `f` (new id to old id).
    pub fn precompose(&self, observations: Vec<String>, f: &[usize]) -> Process {
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|t| t.as_ref().map(|t| f.iter().map(|&b| t[b]).collect())).collect())
            .collect();
        Process { observations, delta, ..self.clone() }
    }
}
