use std::collections::{BTreeMap, VecDeque};

use crate::error::{CoreError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    NfaFinite,
    DfaFinite,
    /// Deterministic Büchi: accepted iff accepting states recur.
    Buchi,
    /// Deterministic parity: accepted iff the largest recurring priority is even.
    Parity,
}

/// Finite automaton over a dense alphabet. `trans[q][a]` lists successors, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordAutomaton {
    pub mode: Mode,
    pub letters: Vec<String>,
    pub state_names: Vec<String>,
    pub initial: Option<usize>,
    pub trans: Vec<Vec<Vec<usize>>>,
    pub accepting: Vec<bool>,
    /// Meaningful in parity mode only.
    pub priority: Vec<u32>,
}

impl WordAutomaton {
    /// An automaton with `n` states named by index, no transitions, none accepting.
    pub fn new(mode: Mode, letters: Vec<String>, n: usize) -> Self {
        let k = letters.len();
        WordAutomaton {
            mode,
            letters,
            state_names: (0..n).map(|q| format!("q{q}")).collect(),
            initial: if n > 0 { Some(0) } else { None },
            trans: vec![vec![Vec::new(); k]; n],
            accepting: vec![false; n],
            priority: vec![0; n],
        }
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn add_state(&mut self, name: String) -> usize {
        self.state_names.push(name);
        self.trans.push(vec![Vec::new(); self.letters.len()]);
        self.accepting.push(false);
        self.priority.push(0);
        self.trans.len() - 1
    }

    pub fn add_transition(&mut self, p: usize, a: usize, q: usize) {
        let row = &mut self.trans[p][a];
        if let Err(pos) = row.binary_search(&q) {
            row.insert(pos, q);
        }
    }

    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.trans[q][a]
    }

    /// The unique successor in a deterministic mode.
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.trans[q][a][0]
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.is_some() && self.trans.iter().all(|row| row.iter().all(|s| s.len() == 1))
    }

    pub fn check(&self) -> Result<()> {
        let n = self.num_states();
        if let Some(q) = self.initial {
            if q >= n {
                return Err(CoreError::MalformedAutomaton("initial state out of range".into()));
            }
        }
        if self.accepting.len() != n || self.priority.len() != n || self.state_names.len() != n {
            return Err(CoreError::MalformedAutomaton("per-state tables have the wrong length".into()));
        }
        for row in &self.trans {
            if row.len() != self.num_letters() || row.iter().flatten().any(|&t| t >= n) {
                return Err(CoreError::MalformedAutomaton("transition table malformed".into()));
            }
        }
        if self.mode != Mode::NfaFinite && !self.is_deterministic() {
            return Err(CoreError::MalformedAutomaton(
                "deterministic mode requires exactly one successor per state and letter".into(),
            ));
        }
        Ok(())
    }

    /// Set of states reached on `word` (finite-word semantics).
    pub fn reach(&self, word: &[usize]) -> Vec<usize> {
        let mut cur: Vec<usize> = self.initial.into_iter().collect();
        for &a in word {
            let mut next: Vec<usize> = cur.iter().flat_map(|&q| self.trans[q][a].iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.reach(word).iter().any(|&q| self.accepting[q])
    }

    /// Powerset construction from `{q0}`; subsets are named by their sorted member lists.
    pub fn determinize(&self) -> WordAutomaton {
        self.determinize_capped(usize::MAX).expect("uncapped")
    }

    pub fn determinize_capped(&self, cap: usize) -> Result<WordAutomaton> {
        let k = self.num_letters();
        let mut d = WordAutomaton::new(Mode::DfaFinite, self.letters.clone(), 0);
        let start: Vec<usize> = self.initial.into_iter().collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let name = |s: &Vec<usize>| {
            let parts: Vec<&str> = s.iter().map(|&q| self.state_names[q].as_str()).collect();
            format!("{{{}}}", parts.join(","))
        };
        let s0 = d.add_state(name(&start));
        d.accepting[s0] = start.iter().any(|&q| self.accepting[q]);
        index.insert(start.clone(), s0);
        queue.push_back(start);
        d.initial = Some(s0);
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            for a in 0..k {
                let mut t: Vec<usize> = set.iter().flat_map(|&q| self.trans[q][a].iter().copied()).collect();
                t.sort_unstable();
                t.dedup();
                let tid = match index.get(&t) {
                    Some(&x) => x,
                    None => {
                        if d.num_states() >= cap {
                            return Err(CoreError::Cap { what: "powerset states".into(), limit: cap });
                        }
                        let x = d.add_state(name(&t));
                        d.accepting[x] = t.iter().any(|&q| self.accepting[q]);
                        index.insert(t.clone(), x);
                        queue.push_back(t);
                        x
                    }
                };
                d.trans[id][a] = vec![tid];
            }
        }
        Ok(d)
    }

    /// Keeps the states that are reachable from q0 and co-reachable to an accepting state.
    pub fn trim(&self) -> WordAutomaton {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        if let Some(q0) = self.initial {
            let mut stack = vec![q0];
            fwd[q0] = true;
            while let Some(q) = stack.pop() {
                for &t in self.trans[q].iter().flatten() {
                    if !fwd[t] {
                        fwd[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        let mut rev = vec![Vec::new(); n];
        for q in 0..n {
            for &t in self.trans[q].iter().flatten() {
                rev[t].push(q);
            }
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&q| self.accepting[q]).collect();
        for &q in &stack {
            bwd[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&q| fwd[q] && bwd[q]).collect();
        let mode = if self.mode == Mode::DfaFinite { Mode::NfaFinite } else { self.mode };
        let mut out = WordAutomaton::new(mode, self.letters.clone(), 0);
        let mut id = vec![usize::MAX; n];
        for &q in &keep {
            id[q] = out.add_state(self.state_names[q].clone());
            out.accepting[id[q]] = self.accepting[q];
            out.priority[id[q]] = self.priority[q];
        }
        for &q in &keep {
            for a in 0..self.num_letters() {
                for &t in &self.trans[q][a] {
                    if id[t] != usize::MAX {
                        out.trans[id[q]][a].push(id[t]);
                    }
                }
            }
        }
        out.initial = self.initial.filter(|&q| id[q] != usize::MAX).map(|q| id[q]);
        out
    }

    pub fn is_empty_language(&self) -> bool {
        self.trim().initial.is_none()
    }

    /// Minimal DFA (reachable part, Moore refinement). Requires a complete deterministic automaton.
    pub fn minimize(&self) -> WordAutomaton {
        assert!(self.is_deterministic(), "minimize needs a complete DFA");
        let n = self.num_states();
        let q0 = self.initial.expect("deterministic");
        let mut reach = vec![false; n];
        let mut order = vec![q0];
        reach[q0] = true;
        let mut k = 0;
        while k < order.len() {
            let q = order[k];
            k += 1;
            for a in 0..self.num_letters() {
                let t = self.next(q, a);
                if !reach[t] {
                    reach[t] = true;
                    order.push(t);
                }
            }
        }
        let mut class = vec![0usize; n];
        for &q in &order {
            class[q] = usize::from(self.accepting[q]) + 2 * self.priority[q] as usize;
        }
        let mut count = usize::MAX;
        loop {
            let mut sig: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = class.clone();
            for &q in &order {
                let key = (class[q], (0..self.num_letters()).map(|a| class[self.next(q, a)]).collect());
                let l = sig.len();
                next[q] = *sig.entry(key).or_insert(l);
            }
            class = next;
            if sig.len() == count {
                break;
            }
            count = sig.len();
        }
        let mut rename: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = WordAutomaton::new(self.mode, self.letters.clone(), 0);
        for &q in &order {
            if !rename.contains_key(&class[q]) {
                let id = out.add_state(self.state_names[q].clone());
                out.accepting[id] = self.accepting[q];
                out.priority[id] = self.priority[q];
                rename.insert(class[q], id);
            }
        }
        for &q in &order {
            let id = rename[&class[q]];
            if out.trans[id].iter().all(|s| s.is_empty()) {
                for a in 0..self.num_letters() {
                    out.trans[id][a] = vec![rename[&class[self.next(q, a)]]];
                }
            }
        }
        out.initial = Some(rename[&class[q0]]);
        out
    }

    /// Complement of a complete DFA.
    pub fn complement(&self) -> WordAutomaton {
        assert!(self.is_deterministic(), "complement needs a complete DFA");
        let mut c = self.clone();
        for f in c.accepting.iter_mut() {
            *f = !*f;
        }
        c
    }

    /// Adds a rejecting sink so that every (state, letter) has a successor.
    pub fn completed(&self) -> WordAutomaton {
        let mut c = self.clone();
        if c.initial.is_none() {
            let s = c.add_state("sink".into());
            c.initial = Some(s);
        }
        let mut sink = None;
        for q in 0..c.num_states() {
            for a in 0..c.num_letters() {
                if c.trans[q][a].is_empty() {
                    let s = *sink.get_or_insert_with(|| {
                        let s = c.add_state("sink".into());
                        for b in 0..self.num_letters() {
                            c.trans[s][b] = vec![s];
                        }
                        s
                    });
                    c.trans[q][a] = vec![s];
                }
            }
        }
        c
    }

    /// Parity value of `q` under this automaton's acceptance: Büchi states map to 2/1.
    pub fn rank(&self, q: usize) -> u32 {
        match self.mode {
            Mode::Parity => self.priority[q],
            _ => {
                if self.accepting[q] {
                    2
                } else {
                    1
                }
            }
        }
    }

    /// Acceptance of the ultimately periodic word `u v^ω` in a deterministic ω-mode.
    pub fn accepts_lasso(&self, u: &[usize], v: &[usize]) -> bool {
        assert!(!v.is_empty());
        let mut q = self.initial.expect("deterministic");
        for &a in u {
            q = self.next(q, a);
        }
        // iterate the cycle until the entry state repeats
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut ranks = Vec::new();
        loop {
            if let Some(&k) = seen.get(&q) {
                let best = ranks[k..].iter().copied().max().unwrap_or(0);
                return best % 2 == 0;
            }
            seen.insert(q, ranks.len());
            let mut best = 0;
            for &a in v {
                q = self.next(q, a);
                best = best.max(self.rank(q));
            }
            ranks.push(best);
        }
    }

    /// A reachable cycle whose maximal rank is odd, as (letters to reach it, letters around it).
    /// For Büchi mode this is a reachable cycle through non-accepting states only.
    pub fn find_rejected_lasso(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let q0 = self.initial?;
        let n = self.num_states();
        let edges: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|q| {
                let mut e: Vec<(usize, usize)> = (0..self.num_letters())
                    .flat_map(|a| self.trans[q][a].iter().map(move |&t| (a, t)))
                    .collect();
                e.sort_unstable();
                e
            })
            .collect();
        let ranks: Vec<u32> = (0..n).map(|q| self.rank(q)).collect();
        let (pre, cyc) = odd_cycle(n, q0, &edges, &ranks)?;
        Some((pre.iter().map(|s| s.0).collect(), cyc.iter().map(|s| s.0).collect()))
    }
}

/// Searches a reachable cycle whose maximal rank (ranks taken on edge targets) is odd.
/// Returns the `(label, target)` steps of a shortest path to a state on the cycle, then the
/// steps around the cycle back to that state.
#[allow(clippy::type_complexity)]
pub fn odd_cycle(
    n: usize,
    start: usize,
    edges: &[Vec<(usize, usize)>],
    rank: &[u32],
) -> Option<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let (dist, parent) = bfs_tree(n, start, edges, |_| true);
    let mut odd: Vec<u32> = rank.iter().copied().filter(|r| r % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    for &p in &odd {
        // states of rank <= p; need a cycle through a state of rank p
        let allowed: Vec<bool> = (0..n).map(|q| dist[q] != usize::MAX && rank[q] <= p).collect();
        let comp = sccs(n, edges, &allowed);
        let mut best: Option<(usize, usize)> = None;
        for q in 0..n {
            if allowed[q] && rank[q] == p {
                let c = comp[q];
                let cyclic = edges[q].iter().any(|&(_, t)| allowed[t] && comp[t] == c);
                if cyclic && best.is_none_or(|(d, _)| dist[q] < d) {
                    best = Some((dist[q], q));
                }
            }
        }
        if let Some((_, q)) = best {
            let prefix = path_steps(&parent, start, q);
            let c = comp[q];
            let (_, cp) = bfs_tree(n, q, edges, |t| allowed[t] && comp[t] == c);
            let cycle = cycle_steps(&cp, q, edges, |t| allowed[t] && comp[t] == c);
            return Some((prefix, cycle));
        }
    }
    None
}

#[allow(clippy::type_complexity)]
fn bfs_tree(
    n: usize,
    start: usize,
    edges: &[Vec<(usize, usize)>],
    ok: impl Fn(usize) -> bool,
) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut q = VecDeque::new();
    dist[start] = 0;
    q.push_back(start);
    while let Some(x) = q.pop_front() {
        for &(a, t) in &edges[x] {
            if ok(t) && dist[t] == usize::MAX {
                dist[t] = dist[x] + 1;
                parent[t] = Some((x, a));
                q.push_back(t);
            }
        }
    }
    (dist, parent)
}

fn path_steps(parent: &[Option<(usize, usize)>], start: usize, mut q: usize) -> Vec<(usize, usize)> {
    let mut steps = Vec::new();
    while q != start {
        let (p, a) = parent[q].expect("on the tree");
        steps.push((a, q));
        q = p;
    }
    steps.reverse();
    steps
}

/// Shortest cycle through `q`: the BFS tree from `q` plus a closing edge back to `q`.
fn cycle_steps(
    parent: &[Option<(usize, usize)>],
    q: usize,
    edges: &[Vec<(usize, usize)>],
    ok: impl Fn(usize) -> bool,
) -> Vec<(usize, usize)> {
    if let Some(&(a, _)) = edges[q].iter().find(|&&(_, t)| t == q) {
        return vec![(a, q)];
    }
    // pick the closing state x with x -> q of minimal depth
    let mut best: Option<(usize, usize, usize)> = None;
    for (x, row) in edges.iter().enumerate() {
        if x != q && (parent[x].is_some()) && ok(x) {
            for &(a, t) in row {
                if t == q {
                    let d = path_steps(parent, q, x).len();
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, x, a));
                    }
                }
            }
        }
    }
    let (_, x, a) = best.expect("q lies on a cycle");
    let mut steps = path_steps(parent, q, x);
    steps.push((a, q));
    steps
}

/// Tarjan SCC restricted to `allowed` states; returns component ids (usize::MAX outside).
pub fn sccs(n: usize, edges: &[Vec<(usize, usize)>], allowed: &[bool]) -> Vec<usize> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if !allowed[root] || index[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (node, next edge index)
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on[root] = true;
        while let Some(&mut (v, ref mut ei)) = work.last_mut() {
            if *ei < edges[v].len() {
                let t = edges[v][*ei].1;
                *ei += 1;
                if !allowed[t] {
                    continue;
                }
                if index[t] == usize::MAX {
                    index[t] = counter;
                    low[t] = counter;
                    counter += 1;
                    stack.push(t);
                    on[t] = true;
                    work.push((t, 0));
                } else if on[t] {
                    low[v] = low[v].min(index[t]);
                }
            } else {
                work.pop();
                if let Some(&(p, _)) = work.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("nonempty");
                        on[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}
