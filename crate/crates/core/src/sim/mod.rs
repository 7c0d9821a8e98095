//! Attack scenarios over a simulated advisor population, with error metrics
//! and report tables.

mod config;
mod epinions;
mod metrics;
mod population;
pub mod report;
mod scenario;

pub use config::ScenarioConfig;
pub use epinions::{ingest_epinions, IngestStats, RatingsCorpus, EPINIONS_SCHEMA, MAX_SKIP_RATIO};
pub use metrics::{absolute_error, ground_truth_trust, mae, Summary};
pub use population::{synthesize_population, Item, Population, SyntheticParams, SYNTHETIC_SCHEMA};
pub use scenario::{
    load_population, run_population, run_scenario, IterationStats, PopulationStats, ResetEvent,
    ScenarioResult,
};
