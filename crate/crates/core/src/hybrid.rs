//! The hybrid adaptive algorithm.
//!
//! Phase 1 runs parallel interview rounds for a prefix of the applicants,
//! each round scheduled as a maximum matching between those applicants and
//! the free positions they most prefer, followed by a truncated DA pass.
//! Phase 2 hands the state to the sequential algorithm. If some Phase 1
//! applicant cannot be given an interview, Phase 3 conducts every remaining
//! interview and runs DA on the fully realized preferences instead.

use rand::Rng;

use crate::da::{interim_profile, run_da, truncated_profile, DaStep};
use crate::error::{Error, Result};
use crate::ids::{ApplicantId, PositionId};
use crate::interim::position_prefers_to_match;
use crate::model::Instance;
use crate::run::{EventKind, RunOptions, RunResult, RunState};
use crate::sequential::{ceiling_for, most_preferred, sequential_loop};
use crate::state::{InterviewLedger, Matching, RejectionSet};

/// Pairs to interview simultaneously in one round. Every applicant and every
/// position appears at most once; pairs are sorted by applicant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterviewBatch {
    pub pairs: Vec<(ApplicantId, PositionId)>,
}

impl InterviewBatch {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Maximum-cardinality matching in a bipartite graph by repeated augmenting
/// path search. Left vertices are tried in ascending order and each
/// adjacency list in its given order, so the result is deterministic.
/// `fixed` pre-assigns left vertices that must stay matched (possibly to a
/// different right vertex). Returns the right partner of every left vertex.
pub fn maximum_matching(
    right_count: usize,
    adjacency: &[Vec<usize>],
    fixed: Option<&[Option<usize>]>,
) -> Vec<Option<usize>> {
    let left_count = adjacency.len();
    let mut left_to_right: Vec<Option<usize>> = fixed.map_or_else(|| vec![None; left_count], <[_]>::to_vec);
    let mut right_to_left: Vec<Option<usize>> = vec![None; right_count];
    for (u, r) in left_to_right.iter().enumerate() {
        if let Some(r) = *r {
            right_to_left[r] = Some(u);
        }
    }

    fn augment(
        u: usize,
        adjacency: &[Vec<usize>],
        seen: &mut [bool],
        left_to_right: &mut [Option<usize>],
        right_to_left: &mut [Option<usize>],
    ) -> bool {
        for &r in &adjacency[u] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let free = match right_to_left[r] {
                None => true,
                Some(w) => augment(w, adjacency, seen, left_to_right, right_to_left),
            };
            if free {
                left_to_right[u] = Some(r);
                right_to_left[r] = Some(u);
                return true;
            }
        }
        false
    }

    let mut seen = vec![false; right_count];
    for u in 0..left_count {
        if left_to_right[u].is_some() {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        augment(u, adjacency, &mut seen, &mut left_to_right, &mut right_to_left);
    }
    left_to_right
}

/// Schedules one round of interviews for `eligible` applicants against the
/// positions that are currently unmatched.
///
/// An applicant is linked to a free position when it belongs to her set of
/// most preferred positions (taken over all positions that have not rejected
/// her) and the two have not met. The batch is a maximum matching of that
/// graph.
pub fn pick_next_interviews(
    instance: &Instance,
    ledger: &InterviewLedger,
    matching: &Matching,
    rejections: &RejectionSet,
    eligible: &[ApplicantId],
) -> InterviewBatch {
    pick_with(instance, ledger, matching, rejections, eligible, None)
}

fn pick_with(
    instance: &Instance,
    ledger: &InterviewLedger,
    matching: &Matching,
    rejections: &RejectionSet,
    eligible: &[ApplicantId],
    ceiling: Option<f64>,
) -> InterviewBatch {
    let adjacency: Vec<Vec<usize>> = eligible
        .iter()
        .map(|&a| {
            let mut edges: Vec<PositionId> = most_preferred(instance, ledger, rejections, ceiling, a)
                .into_iter()
                .filter(|&p| matching.applicant_of(p).is_none() && !ledger.contains(a, p))
                .collect();
            if ceiling.is_some() {
                edges.sort_by(|&x, &y| {
                    instance
                        .applicant_prior(a, y)
                        .total_cmp(&instance.applicant_prior(a, x))
                        .then(x.cmp(&y))
                });
            }
            edges.into_iter().map(|p| p.0).collect()
        })
        .collect();
    let assignment = maximum_matching(instance.m(), &adjacency, None);
    let mut pairs: Vec<(ApplicantId, PositionId)> = eligible
        .iter()
        .zip(assignment)
        .filter_map(|(&a, r)| r.map(|r| (a, PositionId(r))))
        .collect();
    pairs.sort();
    InterviewBatch { pairs }
}

/// Interviews every pair missing from the ledger, one cyclic shift per round:
/// in round `l` applicant `a_i` meets `p_((i + l - 1) mod m) + 1`. Always
/// spans `m` rounds. Requires `m >= n` so that no position meets two
/// applicants in one round.
pub fn all_interviews<R: Rng + ?Sized>(instance: &Instance, ledger: InterviewLedger, rng: &mut R) -> Result<InterviewLedger> {
    let (n, m) = (instance.n(), instance.m());
    let mut state = RunState::new(Matching::empty(n, m), ledger, RejectionSet::new(n, m), false);
    all_interviews_into(instance, rng, &mut state)?;
    Ok(state.ledger)
}

fn all_interviews_into<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, state: &mut RunState) -> Result<()> {
    let (n, m) = (instance.n(), instance.m());
    if m < n {
        return Err(Error::Unsupported(format!(
            "conducting all interviews in parallel rounds needs m >= n (n={n}, m={m})"
        )));
    }
    for shift in 0..m {
        for i in 0..n {
            let (a, p) = (ApplicantId(i), PositionId((i + shift) % m));
            if !state.ledger.contains(a, p) {
                state.interview(instance, rng, a, p)?;
            }
        }
        state.close_round();
    }
    Ok(())
}

/// `max(ceil(10 log2 n), m - n + 1)`.
pub fn parallel_threshold(n: usize, m: usize) -> usize {
    let log_term = (10.0 * (n as f64).log2()).ceil() as usize;
    log_term.max((m + 1).saturating_sub(n))
}

/// Number of applicants (a prefix `a1..`) that interview in parallel:
/// `min(n, m - (k - 1))`, or zero when that is not positive.
pub fn parallel_applicants(n: usize, m: usize) -> usize {
    let k = parallel_threshold(n, m);
    n.min((m + 1).saturating_sub(k))
}

fn record_da_steps(state: &mut RunState, steps: Vec<DaStep>) {
    for step in steps {
        match step {
            DaStep::Accept {
                applicant,
                position,
                displaced,
            } => state.push(EventKind::ProposalAccept, applicant, position, None, displaced),
            DaStep::Reject { applicant, position } => {
                state.push(EventKind::ProposalReject, applicant, position, None, None)
            }
        }
    }
}

fn truncated_pass(instance: &Instance, state: &mut RunState) -> Result<()> {
    let profile = truncated_profile(instance, &state.ledger, &state.rejections);
    let mut steps = Vec::new();
    run_da(&profile, &mut state.matching, &mut state.rejections, &mut |s| steps.push(s))?;
    record_da_steps(state, steps);
    Ok(())
}

/// Phase 3: conduct everything that is left, then DA from scratch on the
/// realized values. Rejections from earlier phases were made under interim
/// beliefs that no longer hold, so the pass starts with a fresh record.
fn fallback<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, state: &mut RunState) -> Result<()> {
    let (n, m) = (instance.n(), instance.m());
    state.phase = Some(3);
    state.iter += 1;
    all_interviews_into(instance, rng, state)?;
    let profile = interim_profile(instance, &state.ledger);
    state.matching = Matching::empty(n, m);
    state.rejections = RejectionSet::new(n, m);
    let mut steps = Vec::new();
    run_da(&profile, &mut state.matching, &mut state.rejections, &mut |s| steps.push(s))?;
    record_da_steps(state, steps);
    Ok(())
}

pub fn run_hybrid<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, options: RunOptions) -> Result<RunResult> {
    let (n, m) = (instance.n(), instance.m());
    if m < n {
        return Err(Error::Unsupported(format!(
            "the hybrid schedule needs m >= n (n={n}, m={m})"
        )));
    }
    let ceiling = ceiling_for(instance, &options)?;
    let parallel = parallel_applicants(n, m);
    let mut state = RunState::new(
        Matching::empty(n, m),
        InterviewLedger::new(n, m),
        RejectionSet::new(n, m),
        options.record_trace,
    );

    state.phase = Some(1);
    loop {
        let active: Vec<ApplicantId> = (0..parallel)
            .map(ApplicantId)
            .filter(|&a| state.matching.position_of(a).is_none() && !state.rejections.exhausted(a))
            .collect();
        if active.is_empty() {
            break;
        }
        state.iter += 1;
        let batch = pick_with(instance, &state.ledger, &state.matching, &state.rejections, &active, ceiling);
        // An empty batch can only occur with `active` non-empty, so it always
        // lands here too.
        if batch.len() != active.len() {
            fallback(instance, rng, &mut state)?;
            return Ok(state.finish(true, true));
        }
        for &(a, p) in &batch.pairs {
            state.interview(instance, rng, a, p)?;
        }
        state.close_round();
        truncated_pass(instance, &mut state)?;
    }

    state.phase = Some(2);
    sequential_loop(instance, rng, options, &mut state)?;
    Ok(state.finish(false, true))
}

/// Experimental fully parallel schedule.
///
/// Every round, all unmatched applicants that still have somewhere to go
/// take part. First, positions an applicant would approach but that would
/// not consider her over their current match reject her without an
/// interview. Then a maximum matching assigns interviews, filling unmatched
/// positions first and only then positions held by someone they value below
/// the applicant. A truncated DA pass follows. When a round changes nothing
/// the run falls back to conducting every interview and running DA on the
/// realized values.
///
/// Outputs are checked like any other, but this schedule carries no
/// stability guarantee.
pub fn run_fully_parallel<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, options: RunOptions) -> Result<RunResult> {
    let (n, m) = (instance.n(), instance.m());
    if m < n {
        return Err(Error::Unsupported(format!(
            "the fully parallel schedule needs m >= n (n={n}, m={m})"
        )));
    }
    let ceiling = ceiling_for(instance, &options)?;
    let mut state = RunState::new(
        Matching::empty(n, m),
        InterviewLedger::new(n, m),
        RejectionSet::new(n, m),
        options.record_trace,
    );
    state.phase = Some(1);

    let is_active = |s: &RunState, a: ApplicantId| s.matching.position_of(a).is_none() && !s.rejections.exhausted(a);
    loop {
        if !(0..n).map(ApplicantId).any(|a| is_active(&state, a)) {
            break;
        }
        state.iter += 1;
        let rejections_before = state.rejections.len();

        for a in (0..n).map(ApplicantId) {
            while is_active(&state, a) {
                let refusing: Vec<PositionId> = most_preferred(instance, &state.ledger, &state.rejections, ceiling, a)
                    .into_iter()
                    .filter(|&p| {
                        !state.ledger.contains(a, p)
                            && !position_prefers_to_match(instance, &state.ledger, &state.matching, p, a)
                    })
                    .collect();
                if refusing.is_empty() {
                    break;
                }
                for p in refusing {
                    state.rejections.insert(a, p);
                    state.push(EventKind::RejectWithoutInterview, a, p, None, None);
                }
            }
        }

        let active: Vec<ApplicantId> = (0..n).map(ApplicantId).filter(|&a| is_active(&state, a)).collect();
        let candidates: Vec<Vec<PositionId>> = active
            .iter()
            .map(|&a| {
                most_preferred(instance, &state.ledger, &state.rejections, ceiling, a)
                    .into_iter()
                    .filter(|&p| !state.ledger.contains(a, p))
                    .collect()
            })
            .collect();
        let free_edges: Vec<Vec<usize>> = candidates
            .iter()
            .map(|ps| {
                ps.iter()
                    .filter(|p| state.matching.applicant_of(**p).is_none())
                    .map(|p| p.0)
                    .collect()
            })
            .collect();
        let first = maximum_matching(m, &free_edges, None);
        let all_edges: Vec<Vec<usize>> = candidates.iter().map(|ps| ps.iter().map(|p| p.0).collect()).collect();
        let assignment = maximum_matching(m, &all_edges, Some(&first));

        let batch: Vec<(ApplicantId, PositionId)> = active
            .iter()
            .zip(assignment)
            .filter_map(|(&a, r)| r.map(|r| (a, PositionId(r))))
            .collect();
        for &(a, p) in &batch {
            state.interview(instance, rng, a, p)?;
        }
        if !batch.is_empty() {
            state.close_round();
        }

        let matching_before = state.matching.clone();
        let rejections_mid = state.rejections.len();
        truncated_pass(instance, &mut state)?;
        let progressed = !batch.is_empty()
            || state.rejections.len() != rejections_mid
            || rejections_before != rejections_mid
            || state.matching != matching_before;
        if !progressed {
            fallback(instance, rng, &mut state)?;
            return Ok(state.finish(true, true));
        }
    }
    Ok(state.finish(false, true))
}
