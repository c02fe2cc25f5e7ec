//! `hgame`: check, transform and synthesize games with hierarchical information, and
//! translate them to and from distributed architectures.
//!
//! Reports go to stdout as JSON, a one-line summary to stderr. Exit codes: 0 when the
//! property holds or the condition is realizable, 1 when it fails or is unrealizable, 2 on
//! usage, precondition or resource errors.

mod arch;
mod check;
mod report;
mod synth;
mod transform;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hgame_arch::doc::parse_architecture;
use hgame_core::doc::{parse_automaton, parse_game, parse_profile, parse_spec, render, render_game};
use hgame_core::{GameGraph, WinningCondition};
use hgame_hierarchy::{gen_from_nfa_emptiness, gen_from_nfa_universality, gen_prime_family};

use report::{load, write_atomic, CapStatus, Caps, Failure, Outcome, Report, Result, Verdict};

#[derive(Parser, Debug)]
#[command(name = "hgame", version, about = "Games with hierarchical information")]
struct Cli {
    /// Cap on explored states, configurations and histories.
    #[arg(long, global = true, env = "HGAME_MAX_STATES", default_value_t = 1_000_000)]
    max_states: usize,
    /// Cap on history depth.
    #[arg(long, global = true, env = "HGAME_MAX_DEPTH", default_value_t = 12)]
    max_depth: usize,
    /// Cap on synthesis arena vertices.
    #[arg(long, global = true, env = "HGAME_MAX_ARENA", default_value_t = 100_000)]
    max_arena: usize,
    /// Add self-loops at dead ends of input games.
    #[arg(long, global = true)]
    complete: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckKind {
    Static,
    Dynamic,
    Recurring,
    Gap,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TransformKind {
    Hierobs,
    Shadow,
    Crossfree,
    Restrict,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a hierarchical-information condition.
    Check {
        kind: CheckKind,
        game: PathBuf,
        /// Write the witness document here on failure.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Transform a game and write the result.
    Transform {
        kind: TransformKind,
        input: PathBuf,
        output: PathBuf,
        /// Condition for `restrict`; defaults to the trivial safety condition.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Where `restrict` writes the lifted condition.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// Synthesize a distributed winning strategy profile.
    Synthesize {
        game: PathBuf,
        spec: PathBuf,
        output: PathBuf,
        /// Restrict to hierarchical histories first.
        #[arg(long)]
        hierarchical: bool,
        #[arg(long, default_value_t = 4)]
        max_priorities: usize,
    },
    /// Model-check a strategy profile.
    Verify {
        game: PathBuf,
        profile: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Game of an architecture.
    Arch2game {
        architecture: PathBuf,
        output: PathBuf,
        /// Condition over monitor states or global actions; defaults to the trivial one.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        spec_out: Option<PathBuf>,
        /// Keep only positions reachable from the initial one.
        #[arg(long)]
        reachable: bool,
    },
    /// Architecture of a game, with a round-trip check.
    Game2arch {
        game: PathBuf,
        output: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Where to write the condition over global actions.
        #[arg(long)]
        spec_out: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Hard-wired pipeline of N processes.
    Pipeline {
        processes: usize,
        output: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        signals: Vec<String>,
        /// Add links from every process to all earlier ones.
        #[arg(long)]
        feedback: bool,
        /// Write the whole architecture instead of the monitor.
        #[arg(long)]
        architecture: bool,
    },
    /// Build the router of an architecture with signal headers.
    Router {
        architecture: PathBuf,
        /// Write the routed architecture as a monitored one.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reduce a game with hierarchical observation to a pipeline.
    Sequentialize {
        game: PathBuf,
        output: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        spec_out: Option<PathBuf>,
        /// Players from most to least informed, 1-based; defaults to the static order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Generate games.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Cycles of the first M prime lengths.
    Prime { m: usize, output: PathBuf },
    /// Hierarchical iff the automaton's language is empty.
    Emptiness { automaton: PathBuf, output: PathBuf },
    /// Reduction from universality of the automaton.
    Universality { automaton: PathBuf, output: PathBuf },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Check { kind, .. } => format!("check {}", kind.to_possible_value().unwrap().get_name()),
            Command::Transform { kind, .. } => format!("transform {}", kind.to_possible_value().unwrap().get_name()),
            Command::Synthesize { .. } => "synthesize".into(),
            Command::Verify { .. } => "verify".into(),
            Command::Arch2game { .. } => "arch2game".into(),
            Command::Game2arch { .. } => "game2arch".into(),
            Command::Pipeline { .. } => "pipeline".into(),
            Command::Router { .. } => "router".into(),
            Command::Sequentialize { .. } => "sequentialize".into(),
            Command::Gen { family } => match family {
                Family::Prime { .. } => "gen prime".into(),
                Family::Emptiness { .. } => "gen emptiness".into(),
                Family::Universality { .. } => "gen universality".into(),
            },
        }
    }
}

fn game(path: &Path, complete: bool) -> Result<GameGraph> {
    let g = load(path, parse_game)?;
    Ok(if complete { g.complete() } else { g })
}

fn spec_or_trivial(path: Option<&Path>, g: &GameGraph) -> Result<WinningCondition> {
    match path {
        Some(p) => load(p, parse_spec),
        None => Ok(WinningCondition::safety(g.colors().names().to_vec(), &[])),
    }
}

fn generated(g: GameGraph, out: &Path) -> Result<Outcome> {
    write_atomic(out, &render_game(&g))?;
    Ok(Outcome::new(Verdict::Ok, format!("game with {} positions", g.num_positions()))
        .artifact(out)
        .stat("positions", g.num_positions())
        .stat("moves", g.moves().len()))
}

fn run(cli: &Cli, caps: Caps) -> Result<Outcome> {
    let c = cli.complete;
    match &cli.command {
        Command::Check { kind, game: path, witness } => check::run(*kind, &game(path, c)?, caps, witness.as_deref()),
        Command::Transform { kind, input, output, spec, spec_out } => {
            let g = game(input, c)?;
            let w = spec_or_trivial(spec.as_deref(), &g)?;
            transform::run(*kind, &g, &w, caps, output, spec_out.as_deref())
        }
        Command::Synthesize { game: path, spec, output, hierarchical, max_priorities } => {
            let g = game(path, c)?;
            let w = load(spec, parse_spec)?;
            synth::run(&g, &w, &synth::config(caps, *max_priorities), *hierarchical, output)
        }
        Command::Verify { game: path, profile, spec, witness } => {
            let g = game(path, c)?;
            let s = load(profile, parse_profile)?;
            let w = load(spec, parse_spec)?;
            synth::verify(&g, &s, &w, caps, witness.as_deref())
        }
        Command::Arch2game { architecture, output, spec, spec_out, reachable } => {
            let a = load(architecture, parse_architecture)?;
            let w = spec.as_deref().map(|p| load(p, parse_spec)).transpose()?;
            arch::arch2game(a, w, caps, *reachable, output, spec_out.as_deref())
        }
        Command::Game2arch { game: path, output, spec, spec_out, depth } => {
            let g = game(path, c)?;
            let w = spec_or_trivial(spec.as_deref(), &g)?;
            arch::game2arch(&g, &w, caps, *depth, output, spec_out.as_deref())
        }
        Command::Pipeline { processes, output, signals, feedback, architecture } => {
            arch::pipeline(*processes, signals, *feedback, *architecture, output)
        }
        Command::Router { architecture, output } => arch::router(load(architecture, parse_architecture)?, caps, output.as_deref()),
        Command::Sequentialize { game: path, output, spec, spec_out, order } => {
            let g = game(path, c)?;
            let w = spec_or_trivial(spec.as_deref(), &g)?;
            arch::sequentialize(&g, &w, order.clone(), caps, output, spec_out.as_deref())
        }
        Command::Gen { family } => match family {
            Family::Prime { m, output } => generated(gen_prime_family(*m)?, output),
            Family::Emptiness { automaton, output } => generated(gen_from_nfa_emptiness(&load(automaton, parse_automaton)?)?, output),
            Family::Universality { automaton, output } => {
                generated(gen_from_nfa_universality(&load(automaton, parse_automaton)?)?, output)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let caps = Caps { max_states: cli.max_states, max_depth: cli.max_depth, max_arena: cli.max_arena };
    let name = cli.command.name();
    let (outcome, error, exceeded) = match run(&cli, caps) {
        Ok(o) => (o, None, false),
        Err(Failure { message, cap }) => (Outcome::new(Verdict::Error, message.clone()), Some(message), cap),
    };
    let report = Report {
        kind: "report",
        version: hgame_core::doc::VERSION,
        command: name.clone(),
        verdict: outcome.verdict,
        details: outcome.details,
        artifacts: outcome.artifacts,
        statistics: outcome.statistics,
        caps: CapStatus { caps, exceeded },
        error,
        wall_time_ms: cli.timing.then(|| start.elapsed().as_millis()),
    };
    print!("{}", render(&report));
    eprintln!("hgame {name}: {}", outcome.summary);
    ExitCode::from(outcome.verdict.exit_code())
}
