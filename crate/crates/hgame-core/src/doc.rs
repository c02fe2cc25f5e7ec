//! JSON documents. Every document carries `{"kind": …, "version": 1}`; kind and version are
//! validated before the payload, and unknown fields are rejected.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::automaton::{Mode, WordAutomaton};
use crate::condition::{ConditionKind, StrategyProfile, WinningCondition};
use crate::error::{CoreError, Result};
use crate::game::{GameBuilder, GameGraph};
use crate::machine::{MealyMachine, MooreMachine};

pub const VERSION: u32 = 1;

/// Reads the `kind` of a document after checking the version.
pub fn peek_kind(text: &str) -> Result<String> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let kind = v
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| CoreError::Document("missing `kind`".into()))?
        .to_string();
    match v.get("version").and_then(|x| x.as_u64()) {
        Some(1) => Ok(kind),
        Some(other) => Err(CoreError::Document(format!("unsupported version {other}"))),
        None => Err(CoreError::Document("missing `version`".into())),
    }
}

/// Parses a document of the expected kind.
pub fn parse<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T> {
    let k = peek_kind(text)?;
    if k != kind {
        return Err(CoreError::Document(format!("expected a `{kind}` document, found `{k}`")));
    }
    serde_json::from_str(text).map_err(json_err)
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn json_err(e: serde_json::Error) -> CoreError {
    CoreError::Document(format!("line {} column {}: {}", e.line(), e.column(), e))
}

fn unknown(symbol: &str, context: &str) -> CoreError {
    CoreError::UnknownSymbol { symbol: symbol.to_string(), context: context.to_string() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionDoc {
    pub name: String,
    pub obs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveDoc {
    pub from: String,
    /// One action per player; `*` stands for every action of that player.
    pub actions: Vec<String>,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub kind: String,
    pub version: u32,
    pub players: usize,
    pub actions: Vec<Vec<String>>,
    pub observations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<String>>,
    pub positions: Vec<PositionDoc>,
    pub initial: String,
    pub moves: Vec<MoveDoc>,
}

impl GameDoc {
    pub fn from_game(g: &GameGraph) -> Self {
        let n = g.players();
        let positions = (0..g.num_positions())
            .map(|v| {
                let name = g.position_name(v).to_string();
                let color = g.colors().name(g.color(v)).to_string();
                PositionDoc {
                    obs: (0..n).map(|i| g.observations(i).name(g.obs(v, i)).to_string()).collect(),
                    color: if color == name { None } else { Some(color) },
                    name,
                }
            })
            .collect();
        let moves = g
            .moves()
            .iter()
            .map(|m| MoveDoc {
                from: g.position_name(m.from).to_string(),
                actions: m.profile.iter().enumerate().map(|(i, &a)| g.actions(i).name(a).to_string()).collect(),
                to: g.position_name(m.to).to_string(),
            })
            .collect();
        GameDoc {
            kind: "game".into(),
            version: VERSION,
            players: n,
            actions: (0..n).map(|i| g.actions(i).names().to_vec()).collect(),
            observations: (0..n).map(|i| g.observations(i).names().to_vec()).collect(),
            colors: Some(g.colors().names().to_vec()),
            positions,
            initial: g.position_name(g.initial()).to_string(),
            moves,
        }
    }

    pub fn to_game(&self) -> Result<GameGraph> {
        let n = self.players;
        if self.actions.len() != n || self.observations.len() != n {
            return Err(CoreError::Malformed("one action and observation alphabet per player".into()));
        }
        let mut b = GameBuilder::new(n);
        for i in 0..n {
            for a in &self.actions[i] {
                if a == "*" {
                    return Err(CoreError::Malformed("`*` is reserved".into()));
                }
                b.action(i, a);
            }
            for o in &self.observations[i] {
                b.observation(i, o);
            }
        }
        if let Some(cs) = &self.colors {
            for c in cs {
                b.color_symbol(c);
            }
        }
        for p in &self.positions {
            if p.obs.len() != n {
                return Err(CoreError::Malformed(format!("position {} needs {n} observations", p.name)));
            }
            if b.position_id(&p.name).is_some() {
                return Err(CoreError::Malformed(format!("duplicate position {}", p.name)));
            }
            for (i, o) in p.obs.iter().enumerate() {
                if !self.observations[i].contains(o) {
                    return Err(unknown(o, &format!("observations of player {} at {}", i + 1, p.name)));
                }
            }
            if let (Some(cs), Some(c)) = (&self.colors, &p.color) {
                if !cs.contains(c) {
                    return Err(unknown(c, &format!("colours at {}", p.name)));
                }
            }
            b.add_position(&p.name, &p.obs, p.color.as_deref());
        }
        let v0 = b.position_id(&self.initial).ok_or_else(|| unknown(&self.initial, "initial"))?;
        b.set_initial(v0);
        for m in &self.moves {
            let from = b.position_id(&m.from).ok_or_else(|| unknown(&m.from, "move source"))?;
            let to = b.position_id(&m.to).ok_or_else(|| unknown(&m.to, "move target"))?;
            if m.actions.len() != n {
                return Err(CoreError::Malformed(format!("move {} -> {} needs {n} actions", m.from, m.to)));
            }
            let mut choices: Vec<Vec<usize>> = Vec::with_capacity(n);
            for (i, a) in m.actions.iter().enumerate() {
                if a == "*" {
                    choices.push((0..self.actions[i].len()).collect());
                } else {
                    let id = self.actions[i]
                        .iter()
                        .position(|x| x == a)
                        .ok_or_else(|| unknown(a, &format!("actions of player {}", i + 1)))?;
                    choices.push(vec![id]);
                }
            }
            for p in cartesian(&choices) {
                b.add_move(from, p, to);
            }
        }
        b.build()
    }
}

fn cartesian(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::new();
        for p in &out {
            for &x in c {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn parse_game(text: &str) -> Result<GameGraph> {
    parse::<GameDoc>(text, "game")?.to_game()
}

pub fn render_game(g: &GameGraph) -> String {
    render(&GameDoc::from_game(g))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooreStateDoc {
    pub out: String,
    pub next: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooreBody {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub states: Vec<MooreStateDoc>,
}

impl MooreBody {
    pub fn from_machine(m: &MooreMachine) -> Self {
        MooreBody {
            inputs: m.input_names.clone(),
            outputs: m.output_names.clone(),
            initial: m.initial,
            states: (0..m.num_states())
                .map(|s| MooreStateDoc { out: m.output_names[m.out[s]].clone(), next: m.delta[s].clone() })
                .collect(),
        }
    }

    pub fn to_machine(&self) -> Result<MooreMachine> {
        let out = self
            .states
            .iter()
            .map(|s| {
                self.outputs.iter().position(|o| *o == s.out).ok_or_else(|| unknown(&s.out, "machine outputs"))
            })
            .collect::<Result<Vec<_>>>()?;
        MooreMachine::new(
            self.inputs.clone(),
            self.outputs.clone(),
            self.initial,
            self.states.iter().map(|s| s.next.clone()).collect(),
            out,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooreDoc {
    pub kind: String,
    pub version: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub states: Vec<MooreStateDoc>,
}

impl MooreDoc {
    fn wrap(b: MooreBody) -> Self {
        MooreDoc { kind: "moore".into(), version: VERSION, inputs: b.inputs, outputs: b.outputs, initial: b.initial, states: b.states }
    }

    fn body(self) -> MooreBody {
        MooreBody { inputs: self.inputs, outputs: self.outputs, initial: self.initial, states: self.states }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MealyStateDoc {
    pub out: Vec<String>,
    pub next: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MealyBody {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub states: Vec<MealyStateDoc>,
}

impl MealyBody {
    pub fn from_machine(m: &MealyMachine) -> Self {
        MealyBody {
            inputs: m.input_names.clone(),
            outputs: m.output_names.clone(),
            initial: m.initial,
            states: (0..m.num_states())
                .map(|s| MealyStateDoc {
                    out: m.out[s].iter().map(|&o| m.output_names[o].clone()).collect(),
                    next: m.delta[s].clone(),
                })
                .collect(),
        }
    }

    pub fn to_machine(&self) -> Result<MealyMachine> {
        let out = self
            .states
            .iter()
            .map(|s| {
                s.out
                    .iter()
                    .map(|o| self.outputs.iter().position(|x| x == o).ok_or_else(|| unknown(o, "machine outputs")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MealyMachine::new(
            self.inputs.clone(),
            self.outputs.clone(),
            self.initial,
            self.states.iter().map(|s| s.next.clone()).collect(),
            out,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MealyDoc {
    pub kind: String,
    pub version: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub states: Vec<MealyStateDoc>,
}

impl MealyDoc {
    fn wrap(b: MealyBody) -> Self {
        MealyDoc { kind: "mealy".into(), version: VERSION, inputs: b.inputs, outputs: b.outputs, initial: b.initial, states: b.states }
    }

    fn body(self) -> MealyBody {
        MealyBody { inputs: self.inputs, outputs: self.outputs, initial: self.initial, states: self.states }
    }
}

pub fn render_moore(m: &MooreMachine) -> String {
    render(&MooreDoc::wrap(MooreBody::from_machine(m)))
}

pub fn parse_moore(text: &str) -> Result<MooreMachine> {
    parse::<MooreDoc>(text, "moore")?.body().to_machine()
}

pub fn render_mealy(m: &MealyMachine) -> String {
    render(&MealyDoc::wrap(MealyBody::from_machine(m)))
}

pub fn parse_mealy(text: &str) -> Result<MealyMachine> {
    parse::<MealyDoc>(text, "mealy")?.body().to_machine()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyProfileDoc {
    pub kind: String,
    pub version: u32,
    pub machines: Vec<MooreBody>,
}

pub fn render_profile(s: &StrategyProfile) -> String {
    render(&StrategyProfileDoc {
        kind: "strategy-profile".into(),
        version: VERSION,
        machines: s.machines.iter().map(MooreBody::from_machine).collect(),
    })
}

pub fn parse_profile(text: &str) -> Result<StrategyProfile> {
    let d: StrategyProfileDoc = parse(text, "strategy-profile")?;
    Ok(StrategyProfile { machines: d.machines.iter().map(|m| m.to_machine()).collect::<Result<_>>()? })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutStateDoc {
    pub name: String,
    #[serde(default)]
    pub accepting: bool,
    #[serde(default)]
    pub priority: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub letter: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonBody {
    /// `nfa`, `dfa`, `buchi` or `parity`.
    pub mode: String,
    pub letters: Vec<String>,
    pub states: Vec<AutStateDoc>,
    pub initial: Option<String>,
    pub transitions: Vec<TransitionDoc>,
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::NfaFinite => "nfa",
        Mode::DfaFinite => "dfa",
        Mode::Buchi => "buchi",
        Mode::Parity => "parity",
    }
}

impl AutomatonBody {
    pub fn from_automaton(a: &WordAutomaton) -> Self {
        let mut transitions = Vec::new();
        for q in 0..a.num_states() {
            for l in 0..a.num_letters() {
                for &t in &a.trans[q][l] {
                    transitions.push(TransitionDoc {
                        from: a.state_names[q].clone(),
                        letter: a.letters[l].clone(),
                        to: a.state_names[t].clone(),
                    });
                }
            }
        }
        AutomatonBody {
            mode: mode_name(a.mode).into(),
            letters: a.letters.clone(),
            states: (0..a.num_states())
                .map(|q| AutStateDoc {
                    name: a.state_names[q].clone(),
                    accepting: a.accepting[q],
                    priority: a.priority[q],
                })
                .collect(),
            initial: a.initial.map(|q| a.state_names[q].clone()),
            transitions,
        }
    }

    pub fn to_automaton(&self) -> Result<WordAutomaton> {
        let mode = match self.mode.as_str() {
            "nfa" => Mode::NfaFinite,
            "dfa" => Mode::DfaFinite,
            "buchi" => Mode::Buchi,
            "parity" => Mode::Parity,
            other => return Err(unknown(other, "automaton modes")),
        };
        let mut a = WordAutomaton::new(mode, self.letters.clone(), 0);
        let find = |name: &str| self.states.iter().position(|s| s.name == name);
        for s in &self.states {
            if find(&s.name) != Some(a.num_states()) {
                return Err(CoreError::MalformedAutomaton(format!("duplicate state {}", s.name)));
            }
            let q = a.add_state(s.name.clone());
            a.accepting[q] = s.accepting;
            a.priority[q] = s.priority;
        }
        a.initial = match &self.initial {
            Some(n) => Some(find(n).ok_or_else(|| unknown(n, "automaton states"))?),
            None => None,
        };
        for t in &self.transitions {
            let p = find(&t.from).ok_or_else(|| unknown(&t.from, "automaton states"))?;
            let q = find(&t.to).ok_or_else(|| unknown(&t.to, "automaton states"))?;
            let l = self.letters.iter().position(|x| *x == t.letter).ok_or_else(|| unknown(&t.letter, "letters"))?;
            a.add_transition(p, l, q);
        }
        a.check()?;
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDoc {
    pub kind: String,
    pub version: u32,
    pub mode: String,
    pub letters: Vec<String>,
    pub states: Vec<AutStateDoc>,
    pub initial: Option<String>,
    pub transitions: Vec<TransitionDoc>,
}

impl AutomatonDoc {
    fn wrap(b: AutomatonBody) -> Self {
        AutomatonDoc { kind: "automaton".into(), version: VERSION, mode: b.mode, letters: b.letters, states: b.states, initial: b.initial, transitions: b.transitions }
    }

    fn body(self) -> AutomatonBody {
        AutomatonBody { mode: self.mode, letters: self.letters, states: self.states, initial: self.initial, transitions: self.transitions }
    }
}

pub fn render_automaton(a: &WordAutomaton) -> String {
    render(&AutomatonDoc::wrap(AutomatonBody::from_automaton(a)))
}

pub fn parse_automaton(text: &str) -> Result<WordAutomaton> {
    parse::<AutomatonDoc>(text, "automaton")?.body().to_automaton()
}

/// A winning condition over a colour (or global-action) alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub kind: String,
    pub version: u32,
    /// `safety`, `reachability`, `buchi` or `parity`.
    pub condition: String,
    pub letters: Vec<String>,
    /// Bad letters for safety, targets for reachability, recurring letters for Büchi.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<String>,
    /// Complete deterministic parity automaton for `parity`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<AutomatonBody>,
}

impl SpecDoc {
    pub fn to_condition(&self) -> Result<WinningCondition> {
        let ids = || {
            self.set
                .iter()
                .map(|c| self.letters.iter().position(|x| x == c).ok_or_else(|| unknown(c, "condition letters")))
                .collect::<Result<Vec<usize>>>()
        };
        match self.condition.as_str() {
            "safety" => Ok(WinningCondition::safety(self.letters.clone(), &ids()?)),
            "reachability" => Ok(WinningCondition::reachability(self.letters.clone(), &ids()?)),
            "buchi" => Ok(WinningCondition::buchi(self.letters.clone(), &ids()?)),
            "parity" => {
                let body = self
                    .automaton
                    .as_ref()
                    .ok_or_else(|| CoreError::Document("parity condition needs an automaton".into()))?;
                let a = body.to_automaton()?;
                if a.letters != self.letters {
                    return Err(CoreError::AlphabetMismatch("automaton letters differ from spec letters".into()));
                }
                if !a.is_deterministic() {
                    return Err(CoreError::MalformedAutomaton("parity automaton must be complete and deterministic".into()));
                }
                WinningCondition::new(ConditionKind::Parity, a)
            }
            other => Err(unknown(other, "condition types")),
        }
    }

    pub fn from_condition(w: &WinningCondition) -> Self {
        SpecDoc {
            kind: "spec".into(),
            version: VERSION,
            condition: "parity".into(),
            letters: w.colors().to_vec(),
            set: Vec::new(),
            automaton: Some(AutomatonBody::from_automaton(&w.automaton)),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<WinningCondition> {
    parse::<SpecDoc>(text, "spec")?.to_condition()
}

pub fn render_spec(w: &WinningCondition) -> String {
    render(&SpecDoc::from_condition(w))
}

/// Certificate of a failed property.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub kind: String,
    pub version: u32,
    pub property: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub players: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histories: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl WitnessDoc {
    pub fn new(property: &str) -> Self {
        WitnessDoc { kind: "witness".into(), version: VERSION, property: property.into(), ..Default::default() }
    }
}

pub fn names(g: &GameGraph, path: &[usize]) -> Vec<String> {
    path.iter().map(|&v| g.position_name(v).to_string()).collect()
}
