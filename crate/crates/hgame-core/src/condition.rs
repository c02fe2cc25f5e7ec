use crate::automaton::{Mode, WordAutomaton};
use crate::error::{CoreError, Result};
use crate::game::GameGraph;
use crate::machine::MooreMachine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    /// Priorities 0 (safe) and 1 (absorbing violation).
    Safety,
    /// Priorities 1 (waiting) and 2 (absorbing success).
    Reachability,
    Parity,
}

/// An ω-regular condition over colours: a complete deterministic parity automaton reading
/// γ(v0) γ(v1) …, accepting iff the largest priority seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningCondition {
    pub kind: ConditionKind,
    pub automaton: WordAutomaton,
}

/// How a colour of a derived game is read by a condition over the original colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorMap {
    Letter(usize),
    /// Ignored: the condition automaton stays put.
    Stutter,
    /// Moves the condition to an absorbing rejecting sink.
    Lose,
}

impl WinningCondition {
    pub fn new(kind: ConditionKind, automaton: WordAutomaton) -> Result<Self> {
        automaton.check()?;
        if automaton.mode != Mode::Parity {
            return Err(CoreError::MalformedAutomaton("conditions are parity automata".into()));
        }
        Ok(WinningCondition { kind, automaton })
    }

    pub fn colors(&self) -> &[String] {
        &self.automaton.letters
    }

    /// Never see a colour from `bad`.
    pub fn safety(colors: Vec<String>, bad: &[usize]) -> Self {
        let k = colors.len();
        let mut a = WordAutomaton::new(Mode::Parity, colors, 2);
        a.state_names = vec!["safe".into(), "violated".into()];
        for c in 0..k {
            a.trans[0][c] = vec![if bad.contains(&c) { 1 } else { 0 }];
            a.trans[1][c] = vec![1];
        }
        a.priority = vec![0, 1];
        WinningCondition { kind: ConditionKind::Safety, automaton: a }
    }

    /// Eventually see a colour from `target`.
    pub fn reachability(colors: Vec<String>, target: &[usize]) -> Self {
        let k = colors.len();
        let mut a = WordAutomaton::new(Mode::Parity, colors, 2);
        a.state_names = vec!["waiting".into(), "reached".into()];
        for c in 0..k {
            a.trans[0][c] = vec![if target.contains(&c) { 1 } else { 0 }];
            a.trans[1][c] = vec![1];
        }
        a.priority = vec![1, 2];
        WinningCondition { kind: ConditionKind::Reachability, automaton: a }
    }

    /// See a colour from `good` infinitely often.
    pub fn buchi(colors: Vec<String>, good: &[usize]) -> Self {
        let k = colors.len();
        let mut a = WordAutomaton::new(Mode::Parity, colors, 2);
        a.state_names = vec!["wait".into(), "good".into()];
        for q in 0..2 {
            for c in 0..k {
                a.trans[q][c] = vec![usize::from(good.contains(&c))];
            }
        }
        a.priority = vec![1, 2];
        WinningCondition { kind: ConditionKind::Parity, automaton: a }
    }

    /// Colours of positions with the given names are bad (all others safe).
    pub fn safety_for_game(g: &GameGraph, bad_colors: &[&str]) -> Self {
        let colors = g.colors().names().to_vec();
        let bad: Vec<usize> = bad_colors.iter().filter_map(|c| g.colors().get(c)).collect();
        Self::safety(colors, &bad)
    }

    pub fn num_priorities(&self) -> usize {
        let mut p = self.automaton.priority.clone();
        p.sort_unstable();
        p.dedup();
        p.len()
    }

    /// State after reading the colour word.
    pub fn run(&self, colors: &[usize]) -> usize {
        let mut q = self.automaton.initial.expect("complete");
        for &c in colors {
            q = self.automaton.next(q, c);
        }
        q
    }

    pub fn step(&self, q: usize, c: usize) -> usize {
        self.automaton.next(q, c)
    }

    pub fn initial(&self) -> usize {
        self.automaton.initial.expect("complete")
    }

    pub fn priority(&self, q: usize) -> u32 {
        self.automaton.priority[q]
    }

    /// Whether the colour lasso `u v^ω` satisfies the condition.
    pub fn accepts_lasso(&self, u: &[usize], v: &[usize]) -> bool {
        self.automaton.accepts_lasso(u, v)
    }

    /// Translates to a colour alphabet `letters` where each new colour is read through `map`.
    pub fn pullback(&self, letters: Vec<String>, map: &[ColorMap]) -> Self {
        let a = &self.automaton;
        let n = a.num_states();
        let needs_sink = map.contains(&ColorMap::Lose);
        let mut b = WordAutomaton::new(Mode::Parity, letters, n);
        b.state_names = a.state_names.clone();
        b.priority = a.priority.clone();
        b.initial = a.initial;
        let odd = a.priority.iter().copied().max().unwrap_or(0) | 1;
        let sink = if needs_sink {
            let s = b.add_state("lost".into());
            b.priority[s] = odd;
            Some(s)
        } else {
            None
        };
        for q in 0..b.num_states() {
            for (c, m) in map.iter().enumerate() {
                let t = if Some(q) == sink {
                    q
                } else {
                    match *m {
                        ColorMap::Letter(x) => a.next(q, x),
                        ColorMap::Stutter => q,
                        ColorMap::Lose => sink.expect("allocated"),
                    }
                };
                b.trans[q][c] = vec![t];
            }
        }
        let kind = match (self.kind, needs_sink) {
            (ConditionKind::Reachability, true) => ConditionKind::Parity,
            (k, _) => k,
        };
        WinningCondition { kind, automaton: b }
    }

    /// Reads the condition over the colour names of `g`, matching names; unknown names are errors.
    pub fn over_game_colors(&self, g: &GameGraph) -> Result<Vec<usize>> {
        g.colors()
            .names()
            .iter()
            .map(|c| {
                self.automaton.letters.iter().position(|x| x == c).ok_or_else(|| {
                    CoreError::AlphabetMismatch(format!("colour `{c}` is not read by the condition"))
                })
            })
            .collect()
    }
}

/// Checks β^i(v) = β^i(v') ⇒ γ(v) = γ(v') for every player, over reachable positions.
/// Returns the first offending (player, v, v').
pub fn observability_violation(g: &GameGraph) -> Option<(usize, usize, usize)> {
    let reach = crate::game::reachable_positions(g);
    let reentered = (0..g.num_positions()).any(|v| reach[v] && g.successors(v).contains(&g.initial()));
    for i in 0..g.players() {
        let mut seen: Vec<Option<usize>> = vec![None; g.observations(i).len()];
        for v in 0..g.num_positions() {
            if !reach[v] || (v == g.initial() && !reentered) {
                continue;
            }
            let b = g.obs(v, i);
            match seen[b] {
                None => seen[b] = Some(v),
                Some(u) if g.color(u) != g.color(v) => return Some((i, u, v)),
                _ => {}
            }
        }
    }
    None
}

/// One Moore machine per player, reading that player's observations and emitting actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyProfile {
    pub machines: Vec<MooreMachine>,
}

impl StrategyProfile {
    pub fn check(&self, g: &GameGraph) -> Result<()> {
        if self.machines.len() != g.players() {
            return Err(CoreError::AlphabetMismatch(format!(
                "{} machines for {} players",
                self.machines.len(),
                g.players()
            )));
        }
        for (i, m) in self.machines.iter().enumerate() {
            if m.input_names.as_slice() != g.observations(i).names() {
                return Err(CoreError::AlphabetMismatch(format!("player {} input alphabet", i + 1)));
            }
            if m.output_names.as_slice() != g.actions(i).names() {
                return Err(CoreError::AlphabetMismatch(format!("player {} action alphabet", i + 1)));
            }
        }
        Ok(())
    }

    /// The action profile prescribed after the given history.
    pub fn profile_at(&self, g: &GameGraph, path: &[usize]) -> Vec<usize> {
        self.machines
            .iter()
            .enumerate()
            .map(|(i, m)| m.output_after(&g.obs_word(path, i)).expect("checked alphabets"))
            .collect()
    }
}
