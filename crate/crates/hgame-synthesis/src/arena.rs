use std::collections::HashMap;

use hgame_core::condition::observability_violation;
use hgame_core::{validate_game, GameGraph, WinningCondition};
use hgame_hierarchy::check_recurring;

use crate::error::{cap, Result, SynthesisError};
use crate::model::{assignments, core, homomorphism, update_components, ActionAssignment, EpistemicModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Homomorphism classes of epistemic models.
    pub max_classes: usize,
    /// Information-consistent assignments on a single model.
    pub max_assignments: usize,
    /// Vertices of the arena product with the condition automaton.
    pub max_arena: usize,
    pub max_priorities: usize,
    /// Configurations for the recurring check, and states for strategy verification.
    pub max_states: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_classes: 100_000, max_assignments: 100_000, max_arena: 100_000, max_priorities: 4, max_states: 1_000_000 }
    }
}

/// One component reached from a representative under an assignment: its class and a
/// homomorphism from the component onto the representative of that class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub target: usize,
    /// Component node n stands for the old node and position `sources[n]`.
    pub sources: Vec<(usize, usize)>,
    pub hom: Vec<usize>,
}

/// Models up to homomorphic equivalence, with every assignment and its outcome.
#[derive(Clone, Debug)]
pub struct KnowledgeArena {
    pub models: Vec<EpistemicModel>,
    /// Game colour of each model.
    pub color: Vec<usize>,
    pub assignments: Vec<Vec<ActionAssignment>>,
    /// `steps[r][a]`: the components Nature may pick after assignment a at model r.
    pub steps: Vec<Vec<Vec<Step>>>,
    pub initial: usize,
}

impl KnowledgeArena {
    pub fn num_classes(&self) -> usize {
        self.models.len()
    }
}

/// Preconditions shared by every synthesis entry point.
pub fn check_preconditions(g: &GameGraph, w: &WinningCondition, cfg: &Config) -> Result<()> {
    if let Some(d) = validate_game(g).into_iter().next() {
        return Err(SynthesisError::DeadEnd { position: d.message });
    }
    w.over_game_colors(g)?;
    if let Some((player, u, v)) = observability_violation(g) {
        return Err(SynthesisError::NotObservable {
            player,
            u: g.position_name(u).to_string(),
            v: g.position_name(v).to_string(),
        });
    }
    if w.num_priorities() > cfg.max_priorities {
        return Err(SynthesisError::TooManyPriorities { found: w.num_priorities(), limit: cfg.max_priorities });
    }
    if let Some(l) = check_recurring(g, cfg.max_states)? {
        return Err(SynthesisError::NotRecurring(Box::new(l)));
    }
    Ok(())
}

struct Registry {
    models: Vec<EpistemicModel>,
    buckets: HashMap<Vec<usize>, Vec<usize>>,
}

impl Registry {
    /// Class of `m` and a homomorphism from `m` onto its representative.
    fn register(&mut self, m: &EpistemicModel, limit: usize) -> Result<(usize, Vec<usize>)> {
        let (c, onto) = core(m);
        let bucket = self.buckets.entry(c.fingerprint()).or_default();
        for &r in bucket.iter() {
            let rep = &self.models[r];
            if let Some(f) = homomorphism(&c, rep) {
                if homomorphism(rep, &c).is_some() {
                    return Ok((r, onto.iter().map(|&k| f[k]).collect()));
                }
            }
        }
        if self.models.len() >= limit {
            return Err(cap(format!("epistemic model classes ({} found)", self.models.len()), limit));
        }
        let r = self.models.len();
        bucket.push(r);
        self.models.push(c);
        Ok((r, onto))
    }
}

/// Unfolds the epistemic models reachable from {v0}, identifying homomorphically equivalent
/// ones. Each new class is represented by the core of its first member.
pub fn unfold_quotient(g: &GameGraph, w: &WinningCondition, cfg: &Config) -> Result<KnowledgeArena> {
    check_preconditions(g, w, cfg)?;
    unfold_unchecked(g, cfg)
}

pub(crate) fn unfold_unchecked(g: &GameGraph, cfg: &Config) -> Result<KnowledgeArena> {
    let mut reg = Registry { models: Vec::new(), buckets: HashMap::new() };
    let (initial, _) = reg.register(&EpistemicModel::initial(g), cfg.max_classes)?;
    let mut all_assignments = Vec::new();
    let mut steps = Vec::new();
    let mut color = Vec::new();
    let mut r = 0;
    while r < reg.models.len() {
        let m = reg.models[r].clone();
        // observability makes ∼-connected nodes agree on colour
        color.push(m.color(g).ok_or_else(|| SynthesisError::Unsound("a model mixes colours".into()))?);
        let asg = assignments(&m, g, cfg.max_assignments)?;
        let mut row = Vec::with_capacity(asg.len());
        for a in &asg {
            let mut out = Vec::new();
            for comp in update_components(&m, a, g) {
                let (target, hom) = reg.register(&comp.model, cfg.max_classes)?;
                out.push(Step { target, sources: comp.sources, hom });
            }
            row.push(out);
        }
        all_assignments.push(asg);
        steps.push(row);
        r += 1;
    }
    Ok(KnowledgeArena { models: reg.models, color, assignments: all_assignments, steps, initial })
}
