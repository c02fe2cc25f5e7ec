use std::path::Path;

use hgame_core::doc::{names, render, WitnessDoc};
use hgame_core::GameGraph;
use hgame_hierarchy::{
    check_dynamic, check_recurring, check_static, explore, gap_size, non_hierarchy_nfa, Gap, LassoWitness, StaticResult,
};

use crate::report::{write_atomic, Caps, Outcome, Result, Verdict};
use crate::CheckKind;

fn players(ps: &[usize]) -> Vec<usize> {
    ps.iter().map(|i| i + 1).collect()
}

pub fn lasso_witness(g: &GameGraph, property: &str, l: &LassoWitness) -> WitnessDoc {
    WitnessDoc { prefix: Some(names(g, &l.prefix)), cycle: Some(names(g, &l.cycle)), ..WitnessDoc::new(property) }
}

/// Adds the witness to the report and writes it when asked to.
pub fn with_witness(out: Outcome, w: &WitnessDoc, path: Option<&Path>) -> Result<Outcome> {
    let out = out.detail("witness", w);
    match path {
        Some(p) => {
            write_atomic(p, &render(w))?;
            Ok(out.artifact(p))
        }
        None => Ok(out),
    }
}

pub fn run(kind: CheckKind, g: &GameGraph, caps: Caps, witness: Option<&Path>) -> Result<Outcome> {
    match kind {
        CheckKind::Static => match check_static(g) {
            StaticResult::Ordered(order) => Ok(Outcome::new(Verdict::Ok, format!("static order {:?}", players(&order)))
                .detail("order", players(&order))),
            StaticResult::Refuted(rs) => {
                let r = &rs[0];
                let w = WitnessDoc {
                    players: players(&[r.i, r.j]),
                    histories: [&r.i_not_below_j.0, &r.i_not_below_j.1, &r.j_not_below_i.0, &r.j_not_below_i.1]
                        .iter()
                        .map(|h| names(g, h))
                        .collect(),
                    note: Some("the first two histories agree for the first player only, the last two for the second only".into()),
                    ..WitnessDoc::new("static")
                };
                let pairs: Vec<Vec<usize>> = rs.iter().map(|r| players(&[r.i, r.j])).collect();
                let out = Outcome::new(Verdict::Fail, format!("players {} and {} are incomparable", r.i + 1, r.j + 1))
                    .detail("incomparable", pairs);
                with_witness(out, &w, witness)
            }
        },
        CheckKind::Dynamic => {
            let states = non_hierarchy_nfa(g).state_names.len();
            match check_dynamic(g) {
                Ok(()) => Ok(Outcome::new(Verdict::Ok, "dynamic hierarchical information").stat("nfa_states", states)),
                Err(x) => {
                    let w = WitnessDoc {
                        players: players(&[x.i, x.j]),
                        histories: [&x.pi, &x.pi_i, &x.pi_j].iter().map(|h| names(g, h)).collect(),
                        round: Some(x.round()),
                        ..WitnessDoc::new("dynamic")
                    };
                    let out = Outcome::new(Verdict::Fail, format!("incomparable information sets at round {}", x.round()))
                        .detail("round", x.round())
                        .stat("nfa_states", states);
                    with_witness(out, &w, witness)
                }
            }
        }
        CheckKind::Recurring => {
            let configurations = explore(g, caps.max_states)?.nodes.len();
            match check_recurring(g, caps.max_states)? {
                None => Ok(Outcome::new(Verdict::Ok, "recurring hierarchical information").stat("configurations", configurations)),
                Some(l) => {
                    let out = Outcome::new(Verdict::Fail, format!("play with a cycle of {} never hierarchical", l.cycle.len()))
                        .stat("configurations", configurations);
                    with_witness(out, &lasso_witness(g, "recurring", &l), witness)
                }
            }
        }
        CheckKind::Gap => match gap_size(g, caps.max_states)? {
            Gap::Bounded(k) => Ok(Outcome::new(Verdict::Ok, format!("gap {k}")).detail("gap", k)),
            Gap::Unbounded => {
                let out = Outcome::new(Verdict::Fail, "gap unbounded").detail("gap", "unbounded");
                match check_recurring(g, caps.max_states)? {
                    Some(l) => with_witness(out, &lasso_witness(g, "gap", &l), witness),
                    None => Ok(out),
                }
            }
        },
    }
}
