use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use interview_match::harness::{d1_instance, replay, run_experiment, Algorithm, Experiment, ExperimentConfig, MRule};
use interview_match::{check_interim_stability, Instance, InterviewLedger, Matching, ModelKind, Result, SelectionRule};

#[derive(Parser)]
#[command(name = "interview-match", version, about = "Interview scheduling for two-sided matching markets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded Monte Carlo sweep and write one CSV row per trial.
    Run(RunArgs),
    /// Replay the sequential algorithm on a fixed-values instance.
    Replay {
        /// Instance JSON; the bundled 5x5 worked example when omitted.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Check a matching and interview ledger for interim stability.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        ledger: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Market sizes on the applicant side (comma separated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Position counts, one per n or a single value for all.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; the summary JSON lands next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Tie-breaking rule among equally preferred positions.
    #[arg(long, value_enum)]
    selection: Option<SelectionRule>,
    /// Value uninterviewed positions at the upper threshold.
    #[arg(long)]
    ceiling: bool,
}

enum Outcome {
    Ok,
    Unstable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Unstable) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Run(args) => run(args),
        Command::Replay { fixture } => {
            let instance = match fixture {
                Some(path) => Instance::from_json(&fs::read_to_string(path)?)?,
                None => d1_instance(),
            };
            replay_and_print(&instance)
        }
        Command::Check {
            instance,
            matching,
            ledger,
        } => {
            let instance = Instance::from_json(&fs::read_to_string(instance)?)?;
            let matching: Matching = serde_json::from_str(&fs::read_to_string(matching)?)?;
            let ledger: InterviewLedger = serde_json::from_str(&fs::read_to_string(ledger)?)?;
            let report = check_interim_stability(&instance, &ledger, &matching)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.is_interim_stable {
                Outcome::Ok
            } else {
                Outcome::Unstable
            })
        }
    }
}

fn replay_and_print(instance: &Instance) -> Result<Outcome> {
    let report = replay(instance)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.stability.is_interim_stable {
        Outcome::Ok
    } else {
        Outcome::Unstable
    })
}

fn run(args: RunArgs) -> Result<Outcome> {
    if args.experiment == Experiment::D1Replay {
        return replay_and_print(&d1_instance());
    }
    let mut config = ExperimentConfig::preset(args.experiment);
    if !args.n.is_empty() {
        config.n_values = args.n;
        if config.m_rule != MRule::NPlus10LogN {
            config.m_rule = MRule::Equal;
        }
    }
    if !args.m.is_empty() {
        config.m_rule = MRule::Explicit(args.m);
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(a) = args.algorithm {
        config.algorithm = a;
    }
    if let Some(model) = args.model {
        config.model = model;
    }
    if let Some(s) = args.selection {
        config.variants.selection = s;
    }
    config.variants.uninterviewed_ceiling = args.ceiling;
    config.base_seed = args.seed;
    config.output_path = args.out;

    let (_, stats) = run_experiment(&config)?;
    println!("{}", serde_json::to_string_pretty(&stats)?);
    Ok(if stats.unstable_trials == 0 {
        Outcome::Ok
    } else {
        Outcome::Unstable
    })
}
