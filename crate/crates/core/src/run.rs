//! Shared run bookkeeping: options, per-iteration trace events, metrics and
//! the final result of an algorithm run.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ids::{ApplicantId, PositionId};
use crate::interim::conduct_interview;
use crate::model::{Instance, Utility};
use crate::state::{InterviewLedger, InterviewRecord, Matching, RejectionSet};

/// How the sequential algorithm picks among an applicant's equally preferred
/// positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SelectionRule {
    /// The position whose current match it values least, an unmatched
    /// position scoring lowest; remaining ties go to the lower index.
    #[default]
    LowestHeldValue,
    /// Unmatched positions first, then positions that do not interim like
    /// their current match, then everything else; ties by index.
    UnmatchedThenUnliked,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub record_trace: bool,
    pub selection: SelectionRule,
    /// Treat every position an applicant has not interviewed as worth the
    /// applicants' upper threshold when forming her most-preferred set, and
    /// break selection ties by the original priors. Requires the
    /// almost-equivalent value model.
    pub uninterviewed_ceiling: bool,
}

impl RunOptions {
    pub fn traced() -> Self {
        RunOptions {
            record_trace: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Interview,
    ProposalAccept,
    ProposalReject,
    RejectWithoutInterview,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundEvent {
    pub iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<u8>,
    pub kind: EventKind,
    pub applicant: ApplicantId,
    pub position: PositionId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Utility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Utility>,
    /// Applicant released by the position on an accepted proposal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displaced: Option<ApplicantId>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRounds {
    pub phase1: usize,
    pub phase2: usize,
    pub phase3: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub total_interviews: usize,
    pub total_rounds: usize,
    pub per_applicant_interviews: Vec<usize>,
    pub per_position_interviews: Vec<usize>,
    /// Rounds per phase for the hybrid and fully parallel schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<PhaseRounds>,
    pub fallback_triggered: bool,
    /// Applicants left unmatched after every position rejected them.
    pub exhausted_applicants: usize,
    /// Main-loop iterations across all phases.
    pub iterations: usize,
}

impl Metrics {
    pub fn max_agent_interviews(&self) -> usize {
        self.per_applicant_interviews
            .iter()
            .chain(&self.per_position_interviews)
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn interviews_per_applicant(&self) -> f64 {
        self.total_interviews as f64 / self.per_applicant_interviews.len() as f64
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub matching: Matching,
    pub ledger: InterviewLedger,
    pub rejections: RejectionSet,
    pub metrics: Metrics,
    pub trace: Option<Vec<RoundEvent>>,
}

impl RunResult {
    /// Interviewed pairs in the order they were conducted.
    pub fn interview_sequence(&self) -> Vec<(ApplicantId, PositionId)> {
        self.ledger
            .records()
            .iter()
            .map(|r| (r.applicant, r.position))
            .collect()
    }
}

/// One trace event per line.
pub fn write_trace_jsonl<W: Write>(events: &[RoundEvent], mut out: W) -> Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// State threaded through one run, across phases.
pub(crate) struct RunState {
    pub matching: Matching,
    pub ledger: InterviewLedger,
    pub rejections: RejectionSet,
    pub trace: Option<Vec<RoundEvent>>,
    pub iter: usize,
    pub rounds: usize,
    pub phase: Option<u8>,
    pub phase_rounds: PhaseRounds,
}

impl RunState {
    pub fn new(matching: Matching, ledger: InterviewLedger, rejections: RejectionSet, record_trace: bool) -> Self {
        RunState {
            matching,
            ledger,
            rejections,
            trace: record_trace.then(Vec::new),
            iter: 0,
            rounds: 0,
            phase: None,
            phase_rounds: PhaseRounds::default(),
        }
    }

    /// Counts one interview round against the current phase.
    pub fn close_round(&mut self) {
        self.rounds += 1;
        match self.phase {
            Some(1) => self.phase_rounds.phase1 += 1,
            Some(2) => self.phase_rounds.phase2 += 1,
            Some(3) => self.phase_rounds.phase3 += 1,
            _ => {}
        }
    }

    pub fn interview<R: Rng + ?Sized>(
        &mut self,
        instance: &Instance,
        rng: &mut R,
        a: ApplicantId,
        p: PositionId,
    ) -> Result<InterviewRecord> {
        let rec = conduct_interview(instance, &mut self.ledger, rng, a, p)?;
        self.push(EventKind::Interview, a, p, Some((rec.v, rec.u)), None);
        Ok(rec)
    }

    pub fn push(
        &mut self,
        kind: EventKind,
        a: ApplicantId,
        p: PositionId,
        values: Option<(Utility, Utility)>,
        displaced: Option<ApplicantId>,
    ) {
        let (iter, phase) = (self.iter, self.phase);
        let round = phase.map(|_| self.rounds + 1);
        if let Some(trace) = self.trace.as_mut() {
            trace.push(RoundEvent {
                iter,
                round,
                phase,
                kind,
                applicant: a,
                position: p,
                v: values.map(|x| x.0),
                u: values.map(|x| x.1),
                displaced,
            });
        }
    }

    pub fn finish(self, fallback_triggered: bool, with_phases: bool) -> RunResult {
        let (n, _) = self.ledger.dims();
        let exhausted_applicants = (0..n)
            .map(ApplicantId)
            .filter(|&a| self.matching.position_of(a).is_none() && self.rejections.exhausted(a))
            .count();
        let metrics = Metrics {
            total_interviews: self.ledger.len(),
            total_rounds: self.rounds,
            per_applicant_interviews: self.ledger.per_applicant_counts(),
            per_position_interviews: self.ledger.per_position_counts(),
            phases: with_phases.then_some(self.phase_rounds),
            fallback_triggered,
            exhausted_applicants,
            iterations: self.iter,
        };
        RunResult {
            matching: self.matching,
            ledger: self.ledger,
            rejections: self.rejections,
            metrics,
            trace: self.trace,
        }
    }
}
