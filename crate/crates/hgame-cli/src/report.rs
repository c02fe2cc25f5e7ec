use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hgame_arch::ArchError;
use hgame_core::CoreError;
use hgame_synthesis::SynthesisError;
use hgame_transforms::TransformError;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Fail,
    Realizable,
    Unrealizable,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok | Verdict::Realizable => 0,
            Verdict::Fail | Verdict::Unrealizable => 1,
            Verdict::Error => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Caps {
    pub max_states: usize,
    pub max_depth: usize,
    pub max_arena: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapStatus {
    #[serde(flatten)]
    pub caps: Caps,
    pub exceeded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub version: u32,
    pub command: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub statistics: BTreeMap<String, Value>,
    pub caps: CapStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

/// What a command produced, before it is wrapped into a report.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub summary: String,
    pub details: Map<String, Value>,
    pub artifacts: Vec<String>,
    pub statistics: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn new(verdict: Verdict, summary: impl Into<String>) -> Self {
        Outcome { verdict, summary: summary.into(), details: Map::new(), artifacts: Vec::new(), statistics: BTreeMap::new() }
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.into(), serde_json::to_value(value).expect("report values serialize"));
        self
    }

    pub fn stat(mut self, key: &str, value: impl Serialize) -> Self {
        self.statistics.insert(key.into(), serde_json::to_value(value).expect("report values serialize"));
        self
    }

    pub fn artifact(mut self, path: &Path) -> Self {
        self.artifacts.push(path.display().to_string());
        self
    }
}

/// Any error of a command; all of them exit with 2.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub cap: bool,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Self {
        Failure { message: message.into(), cap: false }
    }

    pub fn context(self, what: &str) -> Self {
        Failure { message: format!("{what}: {}", self.message), ..self }
    }
}

fn core_cap(e: &CoreError) -> bool {
    matches!(e, CoreError::Cap { .. })
}

fn transform_cap(e: &TransformError) -> bool {
    matches!(e, TransformError::Core(c) if core_cap(c))
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure { cap: core_cap(&e), message: e.to_string() }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        Failure { cap: transform_cap(&e), message: e.to_string() }
    }
}

impl From<SynthesisError> for Failure {
    fn from(e: SynthesisError) -> Self {
        let cap = match &e {
            SynthesisError::Core(c) => core_cap(c),
            SynthesisError::Transform(t) => transform_cap(t),
            _ => false,
        };
        Failure { cap, message: e.to_string() }
    }
}

impl From<ArchError> for Failure {
    fn from(e: ArchError) -> Self {
        let cap = match &e {
            ArchError::Core(c) => core_cap(c),
            ArchError::Transform(t) => transform_cap(t),
            _ => false,
        };
        Failure { cap, message: e.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Failure>;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))
}

/// Parses a file and prefixes errors with its path.
pub fn load<T, E: Into<Failure>>(path: &Path, parse: impl FnOnce(&str) -> std::result::Result<T, E>) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| e.into().context(&path.display().to_string()))
}

/// Writes through a temporary file in the same directory, then renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Failure::new(format!("{}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| Failure::new(format!("{}: not a file path", path.display())))?;
    let mut tmp: PathBuf = path.to_path_buf();
    tmp.set_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}
