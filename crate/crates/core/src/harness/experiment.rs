use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_instance, run_rng, GeneratorParams};
use super::stats::AggregateStats;
use crate::error::{Error, Result};
use crate::hybrid::{run_fully_parallel, run_hybrid};
use crate::ids::{ApplicantId, PositionId};
use crate::model::{Instance, ModelKind};
use crate::run::{RunOptions, RunResult, SelectionRule};
use crate::sequential::run_sequential;
use crate::stability::{all_applicants_like_match, check_interim_stability, decoupled_da, DecouplingMode, StabilityReport};
use crate::state::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    Fig3Bilateral,
    OrderedTwoPoint,
    PositionsEquivalent,
    HybridRounds,
    FullyParallelRounds,
    Decoupling,
    D1Replay,
    LowerBoundContrapositive,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig3Bilateral => "fig3_bilateral",
            Experiment::OrderedTwoPoint => "ordered_two_point",
            Experiment::PositionsEquivalent => "positions_equivalent",
            Experiment::HybridRounds => "hybrid_rounds",
            Experiment::FullyParallelRounds => "fully_parallel_rounds",
            Experiment::Decoupling => "decoupling",
            Experiment::D1Replay => "d1_replay",
            Experiment::LowerBoundContrapositive => "lower_bound_contrapositive",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            Experiment::OrderedTwoPoint => ModelKind::TwoPointOrdered,
            Experiment::PositionsEquivalent => ModelKind::PositionsEquivalentUniform,
            Experiment::D1Replay => ModelKind::FixedMatrices,
            _ => ModelKind::BilateralUniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Algorithm {
    Sequential,
    Hybrid,
    FullyParallel,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sequential => "sequential",
            Algorithm::Hybrid => "hybrid",
            Algorithm::FullyParallel => "fully_parallel",
        }
    }

    pub fn run<R: rand::Rng + ?Sized>(self, instance: &Instance, rng: &mut R, options: RunOptions) -> Result<RunResult> {
        match self {
            Algorithm::Sequential => run_sequential(instance, rng, options),
            Algorithm::Hybrid => run_hybrid(instance, rng, options),
            Algorithm::FullyParallel => run_fully_parallel(instance, rng, options),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MRule {
    Equal,
    /// m = n + ⌈10 log₂ n⌉.
    NPlus10LogN,
    /// One value per entry of `n_values`, or a single value used for all.
    Explicit(Vec<usize>),
}

impl MRule {
    pub fn resolve(&self, n_values: &[usize]) -> Result<Vec<usize>> {
        match self {
            MRule::Equal => Ok(n_values.to_vec()),
            MRule::NPlus10LogN => Ok(n_values
                .iter()
                .map(|&n| n + (10.0 * (n as f64).log2()).ceil() as usize)
                .collect()),
            MRule::Explicit(ms) if ms.len() == 1 => Ok(vec![ms[0]; n_values.len()]),
            MRule::Explicit(ms) if ms.len() == n_values.len() => Ok(ms.clone()),
            MRule::Explicit(ms) => Err(Error::InvalidParameters(format!(
                "{} m values given for {} n values",
                ms.len(),
                n_values.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantFlags {
    pub selection: SelectionRule,
    pub uninterviewed_ceiling: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: ModelKind,
    pub n_values: Vec<usize>,
    pub m_rule: MRule,
    pub trials: usize,
    pub base_seed: u64,
    pub algorithm: Algorithm,
    pub variants: VariantFlags,
    pub generator: GeneratorParams,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Default sweep for each named experiment.
    pub fn preset(experiment: Experiment) -> ExperimentConfig {
        use Experiment::*;
        let (n_values, m_rule, trials, algorithm) = match experiment {
            Fig3Bilateral => (vec![10, 25, 50, 100, 200], MRule::Equal, 100, Algorithm::Sequential),
            OrderedTwoPoint => (vec![8, 16, 32, 64], MRule::Equal, 100, Algorithm::Sequential),
            PositionsEquivalent => (vec![10, 50], MRule::Equal, 200, Algorithm::Sequential),
            HybridRounds => (vec![128], MRule::NPlus10LogN, 100, Algorithm::Hybrid),
            FullyParallelRounds => (vec![128], MRule::Equal, 100, Algorithm::FullyParallel),
            Decoupling => (vec![100], MRule::Equal, 200, Algorithm::Sequential),
            D1Replay => (vec![5], MRule::Equal, 1, Algorithm::Sequential),
            LowerBoundContrapositive => (vec![5], MRule::Equal, 1000, Algorithm::Sequential),
        };
        ExperimentConfig {
            experiment,
            model: experiment.model(),
            n_values,
            m_rule,
            trials,
            base_seed: 0,
            algorithm,
            variants: VariantFlags::default(),
            generator: GeneratorParams::default(),
            output_path: None,
        }
    }

    pub fn options(&self) -> RunOptions {
        RunOptions {
            record_trace: false,
            selection: self.variants.selection,
            uninterviewed_ceiling: self.variants.uninterviewed_ceiling,
        }
    }

    /// The `(n, m)` grid after validation.
    pub fn sizes(&self) -> Result<Vec<(usize, usize)>> {
        if self.trials == 0 {
            return Err(Error::InvalidParameters("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidParameters("no n values given".into()));
        }
        let ms = self.m_rule.resolve(&self.n_values)?;
        let sizes: Vec<_> = self.n_values.iter().copied().zip(ms).collect();
        for &(n, m) in &sizes {
            if n < 2 || m < 2 {
                return Err(Error::InvalidParameters(format!("market {n}x{m} is too small")));
            }
            if self.algorithm != Algorithm::Sequential && m < n {
                return Err(Error::InvalidParameters(format!(
                    "the {} schedule needs m >= n, got n={n}, m={m}",
                    self.algorithm.name()
                )));
            }
        }
        if self.variants.uninterviewed_ceiling && self.model != ModelKind::AlmostEquivalent4Point {
            return Err(Error::InvalidParameters(
                "the uninterviewed-ceiling variant needs the almost-equivalent model".into(),
            ));
        }
        Ok(sizes)
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub algorithm: String,
    pub total_interviews: usize,
    pub interviews_per_applicant: f64,
    pub max_agent_interviews: usize,
    pub rounds: usize,
    pub phase1_rounds: usize,
    pub phase2_rounds: usize,
    pub fallback: bool,
    pub stable: bool,
    pub all_like_match: bool,
    pub decoupled_stable: bool,
}

pub const CSV_HEADER: &str = "experiment,n,m,trial,seed,algorithm,total_interviews,interviews_per_applicant,\
max_agent_interviews,rounds,phase1_rounds,phase2_rounds,fallback,stable,all_like_match,decoupled_stable";

/// Runs a single trial of `config` at size `(n, m)`.
pub fn run_trial(config: &ExperimentConfig, n: usize, m: usize, trial: usize) -> Result<TrialRecord> {
    let seed = config.base_seed.wrapping_add(trial as u64);
    let instance = generate_instance(config.model, n, m, &config.generator, seed)?;
    let mut rng = run_rng(seed);
    let result = config.algorithm.run(&instance, &mut rng, config.options())?;
    let stable = check_interim_stability(&instance, &result.ledger, &result.matching)?.is_interim_stable;
    let all_like_match = all_applicants_like_match(&instance, &result.ledger, &result.matching)?;
    let (_, decoupled) = decoupled_da(&instance, &result.ledger, DecouplingMode::RealizedOnly)?;
    let phases = result.metrics.phases.unwrap_or_default();
    Ok(TrialRecord {
        experiment: config.experiment.name().to_string(),
        n,
        m,
        trial,
        seed,
        algorithm: config.algorithm.name().to_string(),
        total_interviews: result.metrics.total_interviews,
        interviews_per_applicant: result.metrics.interviews_per_applicant(),
        max_agent_interviews: result.metrics.max_agent_interviews(),
        rounds: result.metrics.total_rounds,
        phase1_rounds: phases.phase1,
        phase2_rounds: phases.phase2,
        fallback: result.metrics.fallback_triggered,
        stable,
        all_like_match,
        decoupled_stable: decoupled.is_interim_stable,
    })
}

/// Builds the trial thread pool, honoring `IM_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("IM_THREADS") {
        let threads: usize = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("IM_THREADS must be a positive integer, got {raw:?}")))?;
        if threads == 0 {
            return Err(Error::InvalidParameters("IM_THREADS must be positive".into()));
        }
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| Error::InvalidParameters(e.to_string()))
}

/// Runs every trial of the sweep. Rows come back ordered by size, then trial.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    if config.experiment == Experiment::D1Replay {
        return Err(Error::InvalidParameters("the worked-example replay is not a sweep; use replay".into()));
    }
    let sizes = config.sizes()?;
    let jobs: Vec<(usize, usize, usize)> = sizes
        .iter()
        .flat_map(|&(n, m)| (0..config.trials).map(move |t| (n, m, t)))
        .collect();
    let pool = thread_pool()?;
    pool.install(|| jobs.par_iter().map(|&(n, m, t)| run_trial(config, n, m, t)).collect())
}

/// Runs the sweep, writes outputs if `output_path` is set, and aggregates.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, AggregateStats)> {
    let records = run_trials(config)?;
    let stats = AggregateStats::from_records(config.experiment.name(), config.algorithm.name(), config.base_seed, &records);
    if let Some(path) = &config.output_path {
        write_csv(&records, File::create(path)?)?;
        let summary = summary_path(path);
        let mut out = BufWriter::new(File::create(summary)?);
        serde_json::to_writer_pretty(&mut out, &stats)?;
        out.write_all(b"\n")?;
        out.flush()?;
    }
    Ok((records, stats))
}

/// `results.csv` → `results.summary.json`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.json")
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

/// Outcome of replaying the sequential algorithm on a fixed instance.
#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub matching: Matching,
    pub interviews: Vec<(ApplicantId, PositionId)>,
    pub stability: StabilityReport,
    pub decoupled_matching: Matching,
    pub decoupled_stability: StabilityReport,
}

/// Sequential run on `instance` followed by full-interim DA on its ledger.
pub fn replay(instance: &Instance) -> Result<ReplayReport> {
    let mut rng = run_rng(0);
    let result = run_sequential(instance, &mut rng, RunOptions::default())?;
    let stability = check_interim_stability(instance, &result.ledger, &result.matching)?;
    let interviews = result.interview_sequence();
    let (decoupled_matching, decoupled_stability) = decoupled_da(instance, &result.ledger, DecouplingMode::FullInterim)?;
    Ok(ReplayReport {
        matching: result.matching,
        interviews,
        stability,
        decoupled_matching,
        decoupled_stability,
    })
}
