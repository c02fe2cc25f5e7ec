use std::collections::{HashMap, VecDeque};

use hgame_core::condition::ConditionKind;
use hgame_core::WinningCondition;

use crate::arena::{Config, KnowledgeArena};
use crate::error::{cap, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Synthesizer,
    Nature,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Synthesizer => Owner::Nature,
            Owner::Nature => Owner::Synthesizer,
        }
    }

    fn of_priority(p: u32) -> Owner {
        if p % 2 == 0 {
            Owner::Synthesizer
        } else {
            Owner::Nature
        }
    }
}

/// Perfect-information game on a finite graph, max-parity for Synthesizer. Every vertex
/// needs a successor.
#[derive(Clone, Debug, Default)]
pub struct ParityGame {
    pub owner: Vec<Owner>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Owner>,
    /// A winning successor for every vertex owned by its winner; some successor elsewhere.
    pub strategy: Vec<usize>,
}

impl ParityGame {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn add_vertex(&mut self, owner: Owner, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, s) in self.succ.iter().enumerate() {
            for &t in s {
                pred[t].push(v);
            }
        }
        pred
    }

    /// Vertices in `alive` from which `player` forces a visit to `target`, with the
    /// attracting successor of each of its vertices outside the target.
    pub fn attractor(&self, player: Owner, target: &[bool], alive: &[bool]) -> (Vec<bool>, Vec<Option<usize>>) {
        attractor(self, &self.predecessors(), player, target, alive)
    }

    /// Zielonka's recursive algorithm; positional strategies for both players.
    pub fn solve(&self) -> Solution {
        let pred = self.predecessors();
        let mut winner = vec![Owner::Nature; self.len()];
        let mut strategy: Vec<usize> = self.succ.iter().map(|s| s.first().copied().unwrap_or(usize::MAX)).collect();
        zielonka(self, &pred, vec![true; self.len()], &mut winner, &mut strategy);
        Solution { winner, strategy }
    }

    /// Synthesizer avoids `bad` forever.
    pub fn solve_safety(&self, bad: &[bool]) -> Solution {
        let all = vec![true; self.len()];
        let (lost, st) = self.attractor(Owner::Nature, bad, &all);
        self.finish(Owner::Nature, &lost, st)
    }

    /// Synthesizer eventually visits `target`.
    pub fn solve_reachability(&self, target: &[bool]) -> Solution {
        let all = vec![true; self.len()];
        let (won, st) = self.attractor(Owner::Synthesizer, target, &all);
        self.finish(Owner::Synthesizer, &won, st)
    }

    /// `region` is won by `player` with attractor strategy `st`; the rest by the opponent,
    /// who stays outside (a trap) by any successor outside the region.
    fn finish(&self, player: Owner, region: &[bool], st: Vec<Option<usize>>) -> Solution {
        let mut winner = vec![player.opponent(); self.len()];
        let mut strategy = vec![usize::MAX; self.len()];
        for v in 0..self.len() {
            if region[v] {
                winner[v] = player;
                strategy[v] = st[v].or_else(|| self.succ[v].first().copied()).unwrap_or(usize::MAX);
            } else {
                strategy[v] = self.succ[v]
                    .iter()
                    .copied()
                    .find(|&t| !region[t])
                    .or_else(|| self.succ[v].first().copied())
                    .unwrap_or(usize::MAX);
            }
        }
        Solution { winner, strategy }
    }
}

fn attractor(
    g: &ParityGame,
    pred: &[Vec<usize>],
    player: Owner,
    target: &[bool],
    alive: &[bool],
) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = g.len();
    let mut inside = vec![false; n];
    let mut st = vec![None; n];
    let mut count: Vec<usize> = (0..n).map(|v| g.succ[v].iter().filter(|&&t| alive[t]).count()).collect();
    let mut q = VecDeque::new();
    for v in 0..n {
        if alive[v] && target[v] {
            inside[v] = true;
            q.push_back(v);
        }
    }
    while let Some(v) = q.pop_front() {
        for &u in &pred[v] {
            if !alive[u] || inside[u] {
                continue;
            }
            if g.owner[u] == player {
                inside[u] = true;
                st[u] = Some(v);
                q.push_back(u);
            } else {
                count[u] -= 1;
                if count[u] == 0 {
                    inside[u] = true;
                    q.push_back(u);
                }
            }
        }
    }
    (inside, st)
}

/// Solves the subgame on `alive` into `winner`/`strategy`. The second recursive call of the
/// textbook formulation is the loop, so the depth is bounded by the number of priorities.
fn zielonka(g: &ParityGame, pred: &[Vec<usize>], mut alive: Vec<bool>, winner: &mut [Owner], strategy: &mut [usize]) {
    loop {
        let Some(p) = (0..g.len()).filter(|&v| alive[v]).map(|v| g.priority[v]).max() else {
            return;
        };
        let x = Owner::of_priority(p);
        let top: Vec<bool> = (0..g.len()).map(|v| alive[v] && g.priority[v] == p).collect();
        let (a, sa) = attractor(g, pred, x, &top, &alive);
        let sub: Vec<bool> = (0..g.len()).map(|v| alive[v] && !a[v]).collect();
        zielonka(g, pred, sub.clone(), winner, strategy);
        let opp: Vec<bool> = (0..g.len()).map(|v| sub[v] && winner[v] == x.opponent()).collect();
        if !opp.contains(&true) {
            for v in 0..g.len() {
                if !alive[v] {
                    continue;
                }
                winner[v] = x;
                if a[v] && g.owner[v] == x {
                    strategy[v] = match sa[v] {
                        Some(t) => t,
                        None => *g.succ[v].iter().find(|&&t| alive[t]).expect("subgames have no dead ends"),
                    };
                }
            }
            return;
        }
        let (b, sb) = attractor(g, pred, x.opponent(), &opp, &alive);
        for v in 0..g.len() {
            if b[v] {
                winner[v] = x.opponent();
                if let Some(t) = sb[v] {
                    strategy[v] = t;
                }
            }
        }
        for v in 0..g.len() {
            alive[v] = alive[v] && !b[v];
        }
    }
}

/// Arena product with the condition automaton. Synthesizer vertices are (model, state);
/// each assignment leads to a Nature vertex whose successors are the components.
#[derive(Clone, Debug)]
pub struct ArenaProduct {
    pub game: ParityGame,
    /// `(model, condition state)` of Synthesizer vertices, `None` for Nature vertices.
    pub vertex: Vec<Option<(usize, usize)>>,
    pub index: HashMap<(usize, usize), usize>,
    pub initial: usize,
    /// Condition states with odd priority are absorbing for safety conditions, even ones
    /// for reachability.
    pub kind: ConditionKind,
}

pub fn arena_product(a: &KnowledgeArena, w: &WinningCondition, cfg: &Config) -> Result<ArenaProduct> {
    let mut game = ParityGame::default();
    let mut vertex = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let q0 = w.step(w.initial(), a.color[a.initial]);
    let colors = |r: usize| a.color[r];
    let mut add = |game: &mut ParityGame, vertex: &mut Vec<Option<(usize, usize)>>, key: (usize, usize)| -> Result<usize> {
        if let Some(&v) = index.get(&key) {
            return Ok(v);
        }
        if game.len() >= cfg.max_arena {
            return Err(cap(format!("arena vertices ({} built)", game.len()), cfg.max_arena));
        }
        let v = game.add_vertex(Owner::Synthesizer, w.priority(key.1));
        vertex.push(Some(key));
        index.insert(key, v);
        Ok(v)
    };
    let initial = add(&mut game, &mut vertex, (a.initial, q0))?;
    let mut k = 0;
    while k < game.len() {
        if let Some((r, q)) = vertex[k] {
            for steps in &a.steps[r] {
                let nv = game.add_vertex(Owner::Nature, 0);
                vertex.push(None);
                game.succ[k].push(nv);
                for s in steps {
                    let t = add(&mut game, &mut vertex, (s.target, w.step(q, colors(s.target))))?;
                    game.succ[nv].push(t);
                }
            }
        }
        k += 1;
    }
    Ok(ArenaProduct { game, vertex, index, initial, kind: w.kind })
}

/// Winner of the arena and an assignment index for every Synthesizer vertex.
#[derive(Clone, Debug)]
pub struct ArenaSolution {
    pub product: ArenaProduct,
    pub synthesizer_wins: bool,
    pub choice: HashMap<(usize, usize), usize>,
}

pub fn solve_perfect_info(a: &KnowledgeArena, w: &WinningCondition, cfg: &Config) -> Result<ArenaSolution> {
    let product = arena_product(a, w, cfg)?;
    let g = &product.game;
    let sol = match product.kind {
        ConditionKind::Safety => {
            let bad: Vec<bool> = (0..g.len()).map(|v| product.vertex[v].is_some() && g.priority[v] % 2 == 1).collect();
            g.solve_safety(&bad)
        }
        ConditionKind::Reachability => {
            let good: Vec<bool> = (0..g.len()).map(|v| product.vertex[v].is_some() && g.priority[v] % 2 == 0).collect();
            g.solve_reachability(&good)
        }
        ConditionKind::Parity => g.solve(),
    };
    let mut choice = HashMap::new();
    for v in 0..g.len() {
        if let Some(key) = product.vertex[v] {
            let t = sol.strategy[v];
            let k = g.succ[v].iter().position(|&x| x == t).unwrap_or(0);
            choice.insert(key, k);
        }
    }
    Ok(ArenaSolution { synthesizer_wins: sol.winner[product.initial] == Owner::Synthesizer, product, choice })
}
