//! `process`, `monitor` and `architecture` documents. Global actions are listed in
//! mixed-radix order with the Environment's component fastest.

use serde::{Deserialize, Serialize};

use hgame_core::doc::{parse, render, VERSION};
use hgame_core::CoreError;

use crate::error::{ArchError, Result};
use crate::monitor::{MonitoredArchitecture, ViewMonitor};
use crate::process::Process;
use crate::router::{Aggregation, AggregationEntry, RoutedAction, RoutedArchitecture, RoutedSignal};
use crate::wiring::{HardWired, SignalAlphabet};

fn lookup(names: &[String], s: &str, context: &str) -> Result<usize> {
    names.iter().position(|x| x == s).ok_or_else(|| {
        CoreError::UnknownSymbol { symbol: s.to_string(), context: context.to_string() }.into()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessMoveDoc {
    pub action: String,
    /// Successor per observation.
    pub next: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessStateDoc {
    pub name: String,
    pub moves: Vec<ProcessMoveDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessBody {
    pub actions: Vec<String>,
    pub observations: Vec<String>,
    pub initial: usize,
    pub states: Vec<ProcessStateDoc>,
}

impl ProcessBody {
    pub fn from_process(p: &Process) -> Self {
        ProcessBody {
            actions: p.actions.clone(),
            observations: p.observations.clone(),
            initial: p.initial,
            states: (0..p.num_states())
                .map(|q| ProcessStateDoc {
                    name: p.states[q].clone(),
                    moves: p.delta[q]
                        .iter()
                        .enumerate()
                        .filter_map(|(a, t)| {
                            t.as_ref().map(|t| ProcessMoveDoc { action: p.actions[a].clone(), next: t.clone() })
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_process(&self) -> Result<Process> {
        let mut delta = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let mut row = vec![None; self.actions.len()];
            for m in &s.moves {
                let a = lookup(&self.actions, &m.action, "process actions")?;
                if row[a].is_some() {
                    return Err(ArchError::MalformedProcess(format!("{} lists {} twice", s.name, m.action)));
                }
                row[a] = Some(m.next.clone());
            }
            delta.push(row);
        }
        Process::new(
            self.states.iter().map(|s| s.name.clone()).collect(),
            self.actions.clone(),
            self.observations.clone(),
            self.initial,
            delta,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessDoc {
    pub kind: String,
    pub version: u32,
    pub actions: Vec<String>,
    pub observations: Vec<String>,
    pub initial: usize,
    pub states: Vec<ProcessStateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorStateDoc {
    pub name: String,
    /// Successor per global action.
    pub next: Vec<usize>,
    /// Observation names per global action, one per process.
    pub out: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorBody {
    /// Environment first.
    pub actions: Vec<Vec<String>>,
    pub observations: Vec<Vec<String>>,
    pub initial: usize,
    pub initial_observation: Vec<String>,
    pub states: Vec<MonitorStateDoc>,
}

impl MonitorBody {
    pub fn from_monitor(m: &ViewMonitor) -> Self {
        let names = |b: &[usize]| -> Vec<String> {
            b.iter().enumerate().map(|(i, &x)| m.observations[i][x].clone()).collect()
        };
        MonitorBody {
            actions: m.actions.clone(),
            observations: m.observations.clone(),
            initial: m.initial,
            initial_observation: names(&m.initial_observation),
            states: (0..m.num_states())
                .map(|s| MonitorStateDoc {
                    name: m.states[s].clone(),
                    next: m.delta[s].clone(),
                    out: m.out[s].iter().map(|b| names(b)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_monitor(&self) -> Result<ViewMonitor> {
        let ids = |b: &[String]| -> Result<Vec<usize>> {
            if b.len() != self.observations.len() {
                return Err(ArchError::MalformedMonitor(format!("{} observations for {} processes", b.len(), self.observations.len())));
            }
            b.iter().enumerate().map(|(i, x)| lookup(&self.observations[i], x, "monitor observations")).collect()
        };
        let out = self
            .states
            .iter()
            .map(|s| s.out.iter().map(|b| ids(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ViewMonitor::new(
            self.actions.clone(),
            self.observations.clone(),
            self.states.iter().map(|s| s.name.clone()).collect(),
            self.initial,
            ids(&self.initial_observation)?,
            self.states.iter().map(|s| s.next.clone()).collect(),
            out,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorDoc {
    pub kind: String,
    pub version: u32,
    pub actions: Vec<Vec<String>>,
    pub observations: Vec<Vec<String>>,
    pub initial: usize,
    pub initial_observation: Vec<String>,
    pub states: Vec<MonitorStateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDoc {
    pub control: Vec<String>,
    pub signals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WiringDoc {
    /// Environment first.
    pub stages: Vec<StageDoc>,
    /// `[sender, receiver]`, 0 for the Environment.
    pub links: Vec<[usize; 2]>,
}

impl WiringDoc {
    pub fn from_wiring(w: &HardWired) -> Self {
        WiringDoc {
            stages: w.stages.iter().map(|s| StageDoc { control: s.control.clone(), signals: s.signals.clone() }).collect(),
            links: w.links.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_wiring(&self) -> Result<HardWired> {
        HardWired::new(
            self.stages.iter().map(|s| SignalAlphabet::new(s.control.clone(), s.signals.clone())).collect(),
            self.links.iter().map(|l| (l[0], l[1])).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalDoc {
    pub body: String,
    pub to: usize,
    pub priority: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutedActionDoc {
    pub control: String,
    #[serde(default)]
    pub signals: Vec<SignalDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryDoc {
    /// `[sender, receiver, priority]` headers of the delivered signals.
    pub signals: Vec<(usize, usize, u32)>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum AggregationDoc {
    Sum,
    Table(Vec<TableEntryDoc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouterDoc {
    /// Environment first.
    pub actions: Vec<Vec<RoutedActionDoc>>,
    pub max_priority: u32,
    pub aggregation: AggregationDoc,
}

impl RouterDoc {
    pub fn from_routed(r: &RoutedArchitecture) -> Self {
        RouterDoc {
            actions: r
                .actions
                .iter()
                .map(|acts| {
                    acts.iter()
                        .map(|a| RoutedActionDoc {
                            control: a.control.clone(),
                            signals: a
                                .signals
                                .iter()
                                .map(|s| SignalDoc { body: s.body.clone(), to: s.receiver, priority: s.priority })
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
            max_priority: r.max_priority,
            aggregation: match &r.aggregation {
                Aggregation::Sum => AggregationDoc::Sum,
                Aggregation::Table(t) => AggregationDoc::Table(
                    t.iter().map(|e| TableEntryDoc { signals: e.signals.clone(), value: e.value }).collect(),
                ),
            },
        }
    }

    pub fn to_routed(&self) -> Result<RoutedArchitecture> {
        let actions = self
            .actions
            .iter()
            .map(|acts| {
                acts.iter()
                    .map(|a| RoutedAction {
                        control: a.control.clone(),
                        signals: a
                            .signals
                            .iter()
                            .map(|s| RoutedSignal { body: s.body.clone(), receiver: s.to, priority: s.priority })
                            .collect(),
                    })
                    .collect()
            })
            .collect();
        let aggregation = match &self.aggregation {
            AggregationDoc::Sum => Aggregation::Sum,
            AggregationDoc::Table(t) => Aggregation::Table(
                t.iter().map(|e| AggregationEntry { signals: e.signals.clone(), value: e.value }).collect(),
            ),
        };
        RoutedArchitecture::new(actions, self.max_priority, aggregation)
    }
}

/// An architecture is given by a monitor, by a wiring (whose one-state monitor is implied)
/// or by a router block. Omitted processes are black boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureDoc {
    pub kind: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub processes: Vec<ProcessBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monitor: Option<MonitorBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wiring: Option<WiringDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub router: Option<RouterDoc>,
}

/// What an architecture document describes.
#[derive(Clone, Debug)]
pub enum Architecture {
    Monitored(MonitoredArchitecture),
    Routed(RoutedArchitecture),
}

impl ArchitectureDoc {
    pub fn from_architecture(a: &MonitoredArchitecture) -> Self {
        let black = a.processes.iter().all(|p| p.is_black_box());
        ArchitectureDoc {
            kind: "architecture".into(),
            version: VERSION,
            processes: if black { Vec::new() } else { a.processes.iter().map(ProcessBody::from_process).collect() },
            monitor: if a.wiring.is_some() { None } else { Some(MonitorBody::from_monitor(&a.monitor)) },
            wiring: a.wiring.as_ref().map(WiringDoc::from_wiring),
            router: None,
        }
    }

    pub fn from_routed(r: &RoutedArchitecture) -> Self {
        ArchitectureDoc {
            kind: "architecture".into(),
            version: VERSION,
            processes: Vec::new(),
            monitor: None,
            wiring: None,
            router: Some(RouterDoc::from_routed(r)),
        }
    }

    pub fn to_architecture(&self) -> Result<Architecture> {
        let given = [self.monitor.is_some(), self.wiring.is_some(), self.router.is_some()];
        if given.iter().filter(|&&x| x).count() != 1 {
            return Err(ArchError::MalformedMonitor("give exactly one of `monitor`, `wiring` and `router`".into()));
        }
        if let Some(r) = &self.router {
            if !self.processes.is_empty() {
                return Err(ArchError::MalformedRoute("routed processes are black boxes".into()));
            }
            return Ok(Architecture::Routed(r.to_routed()?));
        }
        let (monitor, wiring) = match (&self.monitor, &self.wiring) {
            (Some(m), _) => (m.to_monitor()?, None),
            (_, Some(w)) => {
                let w = w.to_wiring()?;
                (w.monitor(), Some(w))
            }
            _ => unreachable!("checked above"),
        };
        let mut a = if self.processes.is_empty() {
            MonitoredArchitecture::black_boxes(monitor)
        } else {
            let ps = self.processes.iter().map(|p| p.to_process()).collect::<Result<Vec<_>>>()?;
            MonitoredArchitecture::new(ps, monitor)?
        };
        a.wiring = wiring;
        Ok(a.into())
    }
}

impl From<MonitoredArchitecture> for Architecture {
    fn from(a: MonitoredArchitecture) -> Self {
        Architecture::Monitored(a)
    }
}

pub fn render_process(p: &Process) -> String {
    let b = ProcessBody::from_process(p);
    render(&ProcessDoc {
        kind: "process".into(),
        version: VERSION,
        actions: b.actions,
        observations: b.observations,
        initial: b.initial,
        states: b.states,
    })
}

pub fn parse_process(text: &str) -> Result<Process> {
    let d = parse::<ProcessDoc>(text, "process")?;
    ProcessBody { actions: d.actions, observations: d.observations, initial: d.initial, states: d.states }.to_process()
}

pub fn render_monitor(m: &ViewMonitor) -> String {
    let b = MonitorBody::from_monitor(m);
    render(&MonitorDoc {
        kind: "monitor".into(),
        version: VERSION,
        actions: b.actions,
        observations: b.observations,
        initial: b.initial,
        initial_observation: b.initial_observation,
        states: b.states,
    })
}

pub fn parse_monitor(text: &str) -> Result<ViewMonitor> {
    let d = parse::<MonitorDoc>(text, "monitor")?;
    MonitorBody {
        actions: d.actions,
        observations: d.observations,
        initial: d.initial,
        initial_observation: d.initial_observation,
        states: d.states,
    }
    .to_monitor()
}

pub fn render_architecture(a: &MonitoredArchitecture) -> String {
    render(&ArchitectureDoc::from_architecture(a))
}

pub fn render_routed(r: &RoutedArchitecture) -> String {
    render(&ArchitectureDoc::from_routed(r))
}

pub fn parse_architecture(text: &str) -> Result<Architecture> {
    parse::<ArchitectureDoc>(text, "architecture")?.to_architecture()
}
