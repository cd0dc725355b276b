use serde::{Deserialize, Serialize};

use super::experiment::TrialRecord;

/// Sample statistics of one metric. `std` is the sample standard deviation
/// (zero for a single observation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary {
                mean: f64::NAN,
                std: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
            };
        }
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let var = if values.len() > 1 {
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1.0)
        } else {
            0.0
        };
        Summary {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Standard error of the mean for a sample of `count` observations.
    pub fn std_error(&self, count: usize) -> f64 {
        self.std / (count as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NStats {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub interviews_per_applicant: Summary,
    pub total_interviews: Summary,
    pub rounds: Summary,
    pub max_agent_interviews: Summary,
    pub stability_rate: f64,
    pub fallback_rate: f64,
    /// Fraction of trials in which every matched applicant likes her match.
    pub all_like_rate: f64,
    /// Among trials where every applicant likes her match, the fraction whose
    /// realized-value DA output is interim stable. `None` when no trial
    /// qualified.
    pub decoupled_stable_given_all_like: Option<f64>,
}

impl NStats {
    pub fn from_trials(n: usize, m: usize, rows: &[&TrialRecord]) -> NStats {
        let count = rows.len();
        let metric = |f: fn(&TrialRecord) -> f64| Summary::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
        let rate = |f: fn(&TrialRecord) -> bool| {
            if count == 0 {
                0.0
            } else {
                rows.iter().filter(|r| f(r)).count() as f64 / count as f64
            }
        };
        let liked: Vec<_> = rows.iter().filter(|r| r.all_like_match).collect();
        let decoupled_stable_given_all_like = (!liked.is_empty())
            .then(|| liked.iter().filter(|r| r.decoupled_stable).count() as f64 / liked.len() as f64);
        NStats {
            n,
            m,
            trials: count,
            interviews_per_applicant: metric(|r| r.interviews_per_applicant),
            total_interviews: metric(|r| r.total_interviews as f64),
            rounds: metric(|r| r.rounds as f64),
            max_agent_interviews: metric(|r| r.max_agent_interviews as f64),
            stability_rate: rate(|r| r.stable),
            fallback_rate: rate(|r| r.fallback),
            all_like_rate: rate(|r| r.all_like_match),
            decoupled_stable_given_all_like,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub experiment: String,
    pub algorithm: String,
    pub base_seed: u64,
    pub per_n: Vec<NStats>,
    pub unstable_trials: usize,
}

impl AggregateStats {
    /// Groups consecutive rows sharing `(n, m)`.
    pub fn from_records(experiment: &str, algorithm: &str, base_seed: u64, records: &[TrialRecord]) -> AggregateStats {
        let mut per_n = Vec::new();
        let mut start = 0;
        while start < records.len() {
            let key = (records[start].n, records[start].m);
            let end = records[start..]
                .iter()
                .position(|r| (r.n, r.m) != key)
                .map_or(records.len(), |off| start + off);
            let group: Vec<_> = records[start..end].iter().collect();
            per_n.push(NStats::from_trials(key.0, key.1, &group));
            start = end;
        }
        AggregateStats {
            experiment: experiment.to_string(),
            algorithm: algorithm.to_string(),
            base_seed,
            per_n,
            unstable_trials: records.iter().filter(|r| !r.stable).count(),
        }
    }
}
