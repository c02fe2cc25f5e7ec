//! Distributed architectures with view monitors, their games, pipelines and routers.

pub mod doc;
pub mod error;
pub mod monitor;
pub mod process;
pub mod router;
pub mod sequential;
pub mod translate;
pub mod wiring;

pub use error::{ArchError, Result};
pub use monitor::{MonitoredArchitecture, ViewMonitor};
pub use process::Process;
pub use sequential::{chain_factors, sequentialize_pipeline, Sequentialized};
pub use translate::{arch_to_game, arch_to_game_reachable, check_round_trip, game_to_arch, localized_process, ArchGame, Origin, RoundTrip};
pub use wiring::{HardWired, SignalAlphabet};
pub use router::{build_router, full_delivery, Aggregation, AggregationEntry, RoutedAction, RoutedArchitecture, RoutedSignal, Router};
