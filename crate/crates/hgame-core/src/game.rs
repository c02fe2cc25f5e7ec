use std::collections::BTreeSet;
use std::fmt;

use crate::error::{CoreError, Result};
use crate::symbols::Alphabet;

/// A move `(from, profile, to)`; the profile holds one action index per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub from: usize,
    pub profile: Vec<usize>,
    pub to: usize,
}

/// A finite concurrent game graph with per-player observations and a colouring.
///
/// Immutable once built. Players are indexed from 0 internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    positions: Alphabet,
    initial: usize,
    actions: Vec<Alphabet>,
    observations: Vec<Alphabet>,
    colors: Alphabet,
    obs: Vec<Vec<usize>>,
    color: Vec<usize>,
    moves: Vec<Move>,
    post: Vec<Vec<Vec<usize>>>,
    succ: Vec<Vec<usize>>,
}

impl GameGraph {
    pub fn players(&self) -> usize {
        self.actions.len()
    }

    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn positions(&self) -> &Alphabet {
        &self.positions
    }

    pub fn position_name(&self, v: usize) -> &str {
        self.positions.name(v)
    }

    pub fn actions(&self, i: usize) -> &Alphabet {
        &self.actions[i]
    }

    pub fn observations(&self, i: usize) -> &Alphabet {
        &self.observations[i]
    }

    pub fn colors(&self) -> &Alphabet {
        &self.colors
    }

    /// β^i(v)
    pub fn obs(&self, v: usize, i: usize) -> usize {
        self.obs[v][i]
    }

    /// γ(v)
    pub fn color(&self, v: usize) -> usize {
        self.color[v]
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn num_profiles(&self) -> usize {
        self.actions.iter().map(|a| a.len()).product()
    }

    /// Mixed-radix code of an action profile; player 0 is the least significant digit.
    pub fn encode_profile(&self, profile: &[usize]) -> usize {
        let mut code = 0;
        for i in (0..self.players()).rev() {
            code = code * self.actions[i].len() + profile[i];
        }
        code
    }

    pub fn decode_profile(&self, mut code: usize) -> Vec<usize> {
        let mut p = Vec::with_capacity(self.players());
        for a in &self.actions {
            p.push(code % a.len());
            code /= a.len();
        }
        p
    }

    /// Targets of moves from `v` under the encoded profile.
    pub fn post(&self, v: usize, code: usize) -> &[usize] {
        &self.post[v][code]
    }

    /// vEA: all targets of moves from `v`, sorted.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn obs_word(&self, path: &[usize], i: usize) -> Vec<usize> {
        path.iter().skip(1).map(|&v| self.obs(v, i)).collect()
    }

    pub fn color_word(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&v| self.color(v)).collect()
    }

    pub fn is_history(&self, path: &[usize]) -> bool {
        path.first() == Some(&self.initial)
            && path.windows(2).all(|w| self.succ[w[0]].binary_search(&w[1]).is_ok())
    }

    /// Returns a graph with a self-loop added for every dead `(v, a)`.
    pub fn complete(&self) -> GameGraph {
        let mut b = GameBuilder::from_game(self);
        for v in 0..self.num_positions() {
            for code in 0..self.num_profiles() {
                if self.post[v][code].is_empty() {
                    b.add_move(v, self.decode_profile(code), v);
                }
            }
        }
        b.build().expect("completion of a valid graph")
    }

    /// Rebuilds the same graph with a different colouring.
    pub fn with_colors(&self, names: &[String]) -> Result<GameGraph> {
        if names.len() != self.num_positions() {
            return Err(CoreError::Malformed("colouring must cover every position".into()));
        }
        let mut b = GameBuilder::from_game(self);
        b.colors = Alphabet::new();
        for (v, c) in names.iter().enumerate() {
            b.color[v] = b.colors.intern(c.clone());
        }
        b.build()
    }
}

impl fmt::Display for GameGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "game: {} players, {} positions, {} moves",
            self.players(),
            self.num_positions(),
            self.moves.len()
        )
    }
}

/// Incremental construction of a [`GameGraph`].
#[derive(Clone, Debug)]
pub struct GameBuilder {
    positions: Alphabet,
    initial: Option<usize>,
    actions: Vec<Alphabet>,
    observations: Vec<Alphabet>,
    colors: Alphabet,
    obs: Vec<Vec<usize>>,
    color: Vec<usize>,
    moves: BTreeSet<Move>,
}

impl GameBuilder {
    pub fn new(players: usize) -> Self {
        GameBuilder {
            positions: Alphabet::new(),
            initial: None,
            actions: vec![Alphabet::new(); players],
            observations: vec![Alphabet::new(); players],
            colors: Alphabet::new(),
            obs: Vec::new(),
            color: Vec::new(),
            moves: BTreeSet::new(),
        }
    }

    pub fn from_game(g: &GameGraph) -> Self {
        GameBuilder {
            positions: g.positions.clone(),
            initial: Some(g.initial),
            actions: g.actions.clone(),
            observations: g.observations.clone(),
            colors: g.colors.clone(),
            obs: g.obs.clone(),
            color: g.color.clone(),
            moves: g.moves.iter().cloned().collect(),
        }
    }

    pub fn players(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&mut self, i: usize, name: &str) -> usize {
        self.actions[i].intern(name)
    }

    pub fn observation(&mut self, i: usize, name: &str) -> usize {
        self.observations[i].intern(name)
    }

    pub fn color_symbol(&mut self, name: &str) -> usize {
        self.colors.intern(name)
    }

    pub fn position_id(&self, name: &str) -> Option<usize> {
        self.positions.get(name)
    }

    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    /// Adds a position with one observation per player. A missing colour defaults to the
    /// position name. Re-adding an existing name overwrites its labels.
    pub fn add_position<S: AsRef<str>>(&mut self, name: &str, obs: &[S], color: Option<&str>) -> usize {
        assert_eq!(obs.len(), self.players(), "one observation per player");
        let ids: Vec<usize> = obs
            .iter()
            .enumerate()
            .map(|(i, o)| self.observations[i].intern(o.as_ref()))
            .collect();
        let c = self.colors.intern(color.unwrap_or(name));
        let v = self.positions.intern(name);
        if v == self.obs.len() {
            self.obs.push(ids);
            self.color.push(c);
        } else {
            self.obs[v] = ids;
            self.color[v] = c;
        }
        v
    }

    pub fn set_initial(&mut self, v: usize) {
        self.initial = Some(v);
    }

    pub fn add_move(&mut self, from: usize, profile: Vec<usize>, to: usize) {
        self.moves.insert(Move { from, profile, to });
    }

    /// Adds a move for every profile from `from` to `to`.
    pub fn add_move_all(&mut self, from: usize, to: usize) {
        let sizes: Vec<usize> = self.actions.iter().map(|a| a.len()).collect();
        for p in all_profiles(&sizes) {
            self.add_move(from, p, to);
        }
    }

    /// Adds a move using symbol names, interning actions as needed.
    pub fn add_move_named(&mut self, from: &str, acts: &[&str], to: &str) -> Result<()> {
        let f = self.positions.get(from).ok_or_else(|| unknown(from, "move source"))?;
        let t = self.positions.get(to).ok_or_else(|| unknown(to, "move target"))?;
        if acts.len() != self.players() {
            return Err(CoreError::Malformed(format!(
                "move {from} -> {to} has {} actions for {} players",
                acts.len(),
                self.players()
            )));
        }
        let p = acts.iter().enumerate().map(|(i, a)| self.actions[i].intern(*a)).collect();
        self.add_move(f, p, t);
        Ok(())
    }

    pub fn build(self) -> Result<GameGraph> {
        let n = self.players();
        if n == 0 {
            return Err(CoreError::Malformed("a game needs at least one player".into()));
        }
        if self.positions.is_empty() {
            return Err(CoreError::Malformed("a game needs at least one position".into()));
        }
        let initial = self
            .initial
            .ok_or_else(|| CoreError::Malformed("no initial position".into()))?;
        if initial >= self.positions.len() {
            return Err(CoreError::Malformed("initial position out of range".into()));
        }
        for (i, a) in self.actions.iter().enumerate() {
            if a.is_empty() {
                return Err(CoreError::Malformed(format!("player {} has no actions", i + 1)));
            }
        }
        let nv = self.positions.len();
        let sizes: Vec<usize> = self.actions.iter().map(|a| a.len()).collect();
        let nprof: usize = sizes.iter().product();
        let mut post = vec![vec![Vec::new(); nprof]; nv];
        let mut succ = vec![Vec::new(); nv];
        for m in &self.moves {
            if m.from >= nv || m.to >= nv {
                return Err(CoreError::Malformed(format!("move {:?} refers to an unknown position", m)));
            }
            if m.profile.len() != n {
                return Err(CoreError::Malformed(format!(
                    "move from {} has a profile of arity {}",
                    self.positions.name(m.from),
                    m.profile.len()
                )));
            }
            for (i, &a) in m.profile.iter().enumerate() {
                if a >= sizes[i] {
                    return Err(CoreError::Malformed(format!(
                        "move from {} uses action {a} outside player {}'s alphabet",
                        self.positions.name(m.from),
                        i + 1
                    )));
                }
            }
            let mut code = 0;
            for i in (0..n).rev() {
                code = code * sizes[i] + m.profile[i];
            }
            post[m.from][code].push(m.to);
            succ[m.from].push(m.to);
        }
        for s in succ.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        for p in post.iter_mut().flatten() {
            p.sort_unstable();
            p.dedup();
        }
        Ok(GameGraph {
            positions: self.positions,
            initial,
            actions: self.actions,
            observations: self.observations,
            colors: self.colors,
            obs: self.obs,
            color: self.color,
            moves: self.moves.into_iter().collect(),
            post,
            succ,
        })
    }
}

fn unknown(s: &str, ctx: &str) -> CoreError {
    CoreError::UnknownSymbol { symbol: s.to_string(), context: ctx.to_string() }
}

/// All profiles over the given alphabet sizes, in mixed-radix order (player 0 fastest).
pub fn all_profiles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|mut c| {
            sizes
                .iter()
                .map(|&s| {
                    let d = c % s;
                    c /= s;
                    d
                })
                .collect()
        })
        .collect()
}

/// A problem reported by [`validate_game`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub position: usize,
    pub profile: Option<Vec<usize>>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Reports every dead end `(v, a)`; structural invariants are enforced by the builder.
pub fn validate_game(g: &GameGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for v in 0..g.num_positions() {
        for code in 0..g.num_profiles() {
            if g.post(v, code).is_empty() {
                let p = g.decode_profile(code);
                let names: Vec<&str> = p.iter().enumerate().map(|(i, &a)| g.actions(i).name(a)).collect();
                out.push(Diagnostic {
                    position: v,
                    message: format!("dead end at {} under ({})", g.position_name(v), names.join(",")),
                    profile: Some(p),
                });
            }
        }
    }
    out
}

/// A history: a path of positions starting at the initial position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct History {
    pub path: Vec<usize>,
}

impl History {
    /// Number of moves taken.
    pub fn len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.path.len() <= 1
    }

    pub fn last(&self) -> usize {
        *self.path.last().expect("histories are nonempty")
    }

    pub fn obs_word(&self, g: &GameGraph, i: usize) -> Vec<usize> {
        g.obs_word(&self.path, i)
    }
}

/// Default cap on the number of enumerated histories.
pub const DEFAULT_HISTORY_CAP: usize = 10_000_000;

/// All histories of length at most `depth`, shortest first, then lexicographic.
pub fn enumerate_histories(g: &GameGraph, depth: usize, cap: usize) -> Result<Vec<History>> {
    let mut out = vec![History { path: vec![g.initial()] }];
    let mut layer_start = 0;
    for _ in 0..depth {
        let layer_end = out.len();
        for h in layer_start..layer_end {
            let last = out[h].last();
            for &w in g.successors(last) {
                if out.len() >= cap {
                    return Err(CoreError::Cap { what: "histories".into(), limit: cap });
                }
                let mut p = out[h].path.clone();
                p.push(w);
                out.push(History { path: p });
            }
        }
        layer_start = layer_end;
    }
    Ok(out)
}

/// Histories of length exactly `depth`.
pub fn histories_of_length(g: &GameGraph, depth: usize, cap: usize) -> Result<Vec<History>> {
    let mut layer = vec![History { path: vec![g.initial()] }];
    for _ in 0..depth {
        let mut next = Vec::new();
        for h in &layer {
            for &w in g.successors(h.last()) {
                if next.len() >= cap {
                    return Err(CoreError::Cap { what: "histories".into(), limit: cap });
                }
                let mut p = h.path.clone();
                p.push(w);
                next.push(History { path: p });
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Positions reachable from the initial position.
pub fn reachable_positions(g: &GameGraph) -> Vec<bool> {
    let mut seen = vec![false; g.num_positions()];
    let mut stack = vec![g.initial()];
    seen[g.initial()] = true;
    while let Some(v) = stack.pop() {
        for &w in g.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solo() -> GameGraph {
        let mut b = GameBuilder::new(1);
        b.action(0, "a");
        let v = b.add_position("v0", &["o"], None);
        b.set_initial(v);
        b.add_move(v, vec![0], v);
        b.build().unwrap()
    }

    #[test]
    fn solo_is_valid_and_has_one_history_per_length() {
        let g = solo();
        assert!(validate_game(&g).is_empty());
        let hs = enumerate_histories(&g, 3, DEFAULT_HISTORY_CAP).unwrap();
        assert_eq!(hs.len(), 4);
        assert_eq!(hs[3].path, vec![0, 0, 0, 0]);
    }

    #[test]
    fn dead_end_is_reported_and_completed() {
        let mut b = GameBuilder::new(1);
        b.action(0, "a");
        b.action(0, "b");
        let v = b.add_position("v", &["o"], None);
        b.set_initial(v);
        b.add_move(v, vec![0], v);
        let g = b.build().unwrap();
        let d = validate_game(&g);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("dead end at v under (b)"));
        assert!(validate_game(&g.complete()).is_empty());
    }

    #[test]
    fn profile_codes_round_trip() {
        let mut b = GameBuilder::new(3);
        for i in 0..3 {
            for a in 0..=i {
                b.action(i, &format!("a{a}"));
            }
        }
        let v = b.add_position("v", &["o", "o", "o"], None);
        b.set_initial(v);
        b.add_move_all(v, v);
        let g = b.build().unwrap();
        assert_eq!(g.num_profiles(), 6);
        for c in 0..6 {
            assert_eq!(g.encode_profile(&g.decode_profile(c)), c);
        }
        assert!(validate_game(&g).is_empty());
    }

    #[test]
    fn color_defaults_to_position_name() {
        let g = solo();
        assert_eq!(g.colors().name(g.color(0)), "v0");
    }
}
