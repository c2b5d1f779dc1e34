//! Run configuration, the search loop over exploration strategies, and the
//! run ledger.

pub mod config;
pub mod engine;
pub mod ledger;
pub mod presets;
pub mod run;

pub use config::{RunConfig, TruthSpec, ValidationConfig, SCHEMA_VERSION};
pub use engine::{validation_set, Engine, Entry, Trained};
pub use ledger::{Ledger, LedgerRecord, Location, TrainingSummary};
pub use presets::{preset, Preset};
pub use run::{champion_summary, evaluate_run, labels_from_terms, run_qmla, ChampionSummary, RunOutcome, RunSummary};
