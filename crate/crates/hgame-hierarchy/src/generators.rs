use std::collections::{BTreeSet, HashMap, VecDeque};

use hgame_core::{CoreError, GameBuilder, GameGraph, Result, WordAutomaton};

pub const MAX_PRIME_FAMILY: usize = 5;
const PRIMES: [usize; MAX_PRIME_FAMILY] = [2, 3, 5, 7, 11];

/// Two players, no choices. From v0 Nature enters one of m cycles whose lengths are the first
/// m primes; from every cycle position but the last it may leave to v01 or v10, where the
/// players receive swapped private bits, and then to a common sink v•.
pub fn gen_prime_family(m: usize) -> Result<GameGraph> {
    if m == 0 || m > MAX_PRIME_FAMILY {
        return Err(CoreError::Malformed(format!("prime family index {m} outside 1..={MAX_PRIME_FAMILY}")));
    }
    let mut b = GameBuilder::new(2);
    b.action(0, "-");
    b.action(1, "-");
    let v0 = b.add_position("v0", &["0", "0"], None);
    let v01 = b.add_position("v01", &["1", "0"], None);
    let v10 = b.add_position("v10", &["0", "1"], None);
    let sink = b.add_position("v•", &["•", "•"], None);
    b.set_initial(v0);
    for (r, &p) in PRIMES[..m].iter().enumerate() {
        let ids: Vec<usize> = (0..p).map(|l| b.add_position(&format!("c{}_{}", r + 1, l), &["0", "0"], None)).collect();
        b.add_move_all(v0, ids[0]);
        for l in 0..p - 1 {
            b.add_move_all(ids[l], ids[l + 1]);
            b.add_move_all(ids[l], v01);
            b.add_move_all(ids[l], v10);
        }
        b.add_move_all(ids[p - 1], ids[0]);
    }
    b.add_move_all(v01, sink);
    b.add_move_all(v10, sink);
    b.add_move_all(sink, sink);
    b.build()
}

fn letter_obs(a: &str) -> String {
    format!("in:{a}")
}

/// Nature plays a run of `a` while both players observe the letters read; from a position
/// whose state is accepting Nature may instead send each player a private bit. The result has
/// hierarchical information iff L(a) = ∅.
pub fn gen_from_nfa_emptiness(a: &WordAutomaton) -> Result<GameGraph> {
    let mut b = GameBuilder::new(2);
    b.action(0, "-");
    b.action(1, "-");
    let start = b.add_position("start", &["-", "-"], Some("start"));
    b.set_initial(start);
    let end = b.add_position("end", &["#", "#"], Some("end"));
    b.add_move_all(end, end);
    let mut bits = [[0usize; 2]; 2];
    for (x, row) in bits.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            *slot = b.add_position(&format!("b{x}{y}"), &[format!("bit{x}"), format!("bit{y}")], Some("bit"));
            b.add_move_all(*slot, end);
        }
    }
    let send_bits = |b: &mut GameBuilder, from: usize| {
        for row in &bits {
            for &t in row {
                b.add_move_all(from, t);
            }
        }
    };
    let Some(q0) = a.initial else {
        b.add_move_all(start, end);
        return b.build();
    };
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut targets = |b: &mut GameBuilder, queue: &mut VecDeque<(usize, usize)>, q: usize| -> Vec<usize> {
        let mut out = Vec::new();
        for (s, name) in a.letters.iter().enumerate() {
            for &q2 in a.successors(q, s) {
                let id = *index.entry((q2, s)).or_insert_with(|| {
                    let o = letter_obs(name);
                    let id = b.add_position(&format!("{}|{}", a.state_names[q2], name), &[o.clone(), o], Some("run"));
                    queue.push_back((q2, id));
                    id
                });
                out.push(id);
            }
        }
        out
    };
    let first = targets(&mut b, &mut queue, q0);
    let start_dead = first.is_empty() && !a.accepting[q0];
    for t in first {
        b.add_move_all(start, t);
    }
    if a.accepting[q0] {
        send_bits(&mut b, start);
    }
    if start_dead {
        b.add_move_all(start, end);
    }
    while let Some((q, from)) = queue.pop_front() {
        let next = targets(&mut b, &mut queue, q);
        let dead = next.is_empty() && !a.accepting[q];
        for t in next {
            b.add_move_all(from, t);
        }
        if a.accepting[q] {
            send_bits(&mut b, from);
        }
        if dead {
            b.add_move_all(from, end);
        }
    }
    b.build()
}

/// Positions Σ×Q following runs of `a` (both players see (σ,0)), and per letter σ two fresh
/// positions v_σ, v_σ′ with swapped tags (σ,1)/(σ,0), entered wherever a run enters an
/// accepting (σ,q). Dead ends and the tagged positions lead to a public terminal. Only the
/// reachable part of Σ×Q is built.
pub fn gen_from_nfa_universality(a: &WordAutomaton) -> Result<GameGraph> {
    let mut b = GameBuilder::new(2);
    b.action(0, "-");
    b.action(1, "-");
    let init = b.add_position("init", &["init", "init"], Some("init"));
    b.set_initial(init);
    let end = b.add_position("end", &["#", "#"], Some("end"));
    b.add_move_all(end, end);
    let mut tagged: Vec<Option<(usize, usize)>> = vec![None; a.num_letters()];
    let mut tags = |b: &mut GameBuilder, s: usize| -> (usize, usize) {
        *tagged[s].get_or_insert_with(|| {
            let name = &a.letters[s];
            let (t1, t0) = (format!("{name}/1"), format!("{name}/0"));
            let va = b.add_position(&format!("v_{name}"), &[t1.clone(), t0.clone()], Some("tag"));
            let vb = b.add_position(&format!("v_{name}'"), &[t0, t1], Some("tag"));
            b.add_move_all(va, end);
            b.add_move_all(vb, end);
            (va, vb)
        })
    };
    let Some(q0) = a.initial else {
        b.add_move_all(init, end);
        return b.build();
    };
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut expand = |b: &mut GameBuilder, queue: &mut VecDeque<(usize, usize)>, from: usize, q: usize| {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for (s, name) in a.letters.iter().enumerate() {
            for &q2 in a.successors(q, s) {
                let id = *index.entry((s, q2)).or_insert_with(|| {
                    let o = format!("{name}/0");
                    let id = b.add_position(&format!("{name}|{}", a.state_names[q2]), &[o.clone(), o], Some("run"));
                    queue.push_back((q2, id));
                    id
                });
                out.insert(id);
                if a.accepting[q2] {
                    let (va, vb) = tags(b, s);
                    out.insert(va);
                    out.insert(vb);
                }
            }
        }
        if out.is_empty() {
            out.insert(end);
        }
        for t in out {
            b.add_move_all(from, t);
        }
    };
    expand(&mut b, &mut queue, init, q0);
    while let Some((q, from)) = queue.pop_front() {
        expand(&mut b, &mut queue, from, q);
    }
    b.build()
}
