//! Instance generators, the seeded Monte Carlo runner and its aggregation.

mod experiment;
mod generate;
mod stats;

pub use experiment::{
    replay, run_experiment, run_trial, run_trials, summary_path, thread_pool, write_csv, Algorithm, Experiment,
    ExperimentConfig, MRule, ReplayReport, TrialRecord, VariantFlags, CSV_HEADER,
};
pub use generate::{d1_instance, generate_instance, instance_rng, run_rng, GeneratorParams, D1_FIXTURE};
pub use stats::{AggregateStats, NStats, Summary};
