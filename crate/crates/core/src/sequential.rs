//! The sequential adaptive algorithm: applicant-proposing DA on interim
//! preferences, where a proposal to a position the applicant has not met is
//! replaced by an interview (if the position would consider her) and the
//! applicant then re-evaluates.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ids::{ApplicantId, PositionId};
use crate::interim::{held_value, position_prefers_to_match};
use crate::model::{Instance, Utility};
use crate::run::{EventKind, RunOptions, RunResult, RunState, SelectionRule};
use crate::state::{InterviewLedger, Matching, RejectionSet};

/// Runs the sequential algorithm from the empty matching and an empty ledger.
pub fn run_sequential<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, options: RunOptions) -> Result<RunResult> {
    let (n, m) = (instance.n(), instance.m());
    run_sequential_from(
        instance,
        rng,
        options,
        Matching::empty(n, m),
        InterviewLedger::new(n, m),
        RejectionSet::new(n, m),
    )
}

/// Runs the sequential algorithm from a given state.
pub fn run_sequential_from<R: Rng + ?Sized>(
    instance: &Instance,
    rng: &mut R,
    options: RunOptions,
    matching: Matching,
    ledger: InterviewLedger,
    rejections: RejectionSet,
) -> Result<RunResult> {
    validate_state(instance, &matching, &ledger, &rejections)?;
    let mut state = RunState::new(matching, ledger, rejections, options.record_trace);
    sequential_loop(instance, rng, options, &mut state)?;
    Ok(state.finish(false, false))
}

pub(crate) fn validate_state(
    instance: &Instance,
    matching: &Matching,
    ledger: &InterviewLedger,
    rejections: &RejectionSet,
) -> Result<()> {
    let dims = (instance.n(), instance.m());
    if matching.dims() != dims || ledger.dims() != dims {
        return Err(Error::InconsistentState(format!(
            "state dimensions do not match the {}x{} instance",
            dims.0, dims.1
        )));
    }
    if !matching.is_involution() {
        return Err(Error::InconsistentState("matching is not an involution".into()));
    }
    if !rejections.consistent_with(matching) {
        return Err(Error::InconsistentState("a matched pair is recorded as rejected".into()));
    }
    if let Some((a, p)) = matching.pairs().find(|&(a, p)| !ledger.contains(a, p)) {
        return Err(Error::InconsistentState(format!(
            "({a}, {p}) is matched without an interview"
        )));
    }
    Ok(())
}

/// Value `a` assigns `p` when forming her most-preferred set.
#[inline]
pub(crate) fn selection_value(
    instance: &Instance,
    ledger: &InterviewLedger,
    ceiling: Option<Utility>,
    a: ApplicantId,
    p: PositionId,
) -> Utility {
    match (ceiling, ledger.get(a, p)) {
        (_, Some(r)) => r.v,
        (Some(c), None) => c,
        (None, None) => instance.applicant_prior(a, p),
    }
}

pub(crate) fn ceiling_for(instance: &Instance, options: &RunOptions) -> Result<Option<Utility>> {
    if !options.uninterviewed_ceiling {
        return Ok(None);
    }
    instance.applicant_high_threshold().map(Some).ok_or_else(|| {
        Error::Unsupported("the uninterviewed-ceiling rule needs the almost-equivalent value model".into())
    })
}

/// `a`'s most preferred positions among those that have not rejected her.
pub(crate) fn most_preferred(
    instance: &Instance,
    ledger: &InterviewLedger,
    rejections: &RejectionSet,
    ceiling: Option<Utility>,
    a: ApplicantId,
) -> Vec<PositionId> {
    let mut best = f64::NEG_INFINITY;
    let mut set = Vec::new();
    for p in (0..instance.m()).map(PositionId) {
        if rejections.contains(a, p) {
            continue;
        }
        let val = selection_value(instance, ledger, ceiling, a, p);
        match val.total_cmp(&best) {
            Ordering::Greater => {
                best = val;
                set.clear();
                set.push(p);
            }
            Ordering::Equal => set.push(p),
            Ordering::Less => {}
        }
    }
    set
}

/// Picks the position `a` approaches from her most-preferred set.
fn select_position(
    instance: &Instance,
    ledger: &InterviewLedger,
    matching: &Matching,
    options: &RunOptions,
    a: ApplicantId,
    candidates: &[PositionId],
) -> PositionId {
    let prior_tiebreak = |x: PositionId, y: PositionId| {
        if options.uninterviewed_ceiling {
            instance
                .applicant_prior(a, y)
                .total_cmp(&instance.applicant_prior(a, x))
                .then(x.cmp(&y))
        } else {
            x.cmp(&y)
        }
    };
    let rank = |p: PositionId| -> (u8, Option<Utility>) {
        let held = held_value(instance, ledger, matching, p);
        match options.selection {
            SelectionRule::LowestHeldValue => (0, held),
            SelectionRule::UnmatchedThenUnliked => match (held, matching.applicant_of(p)) {
                (Some(h), Some(holder)) => {
                    let liked = h > instance.position_prior(p, holder);
                    (if liked { 2 } else { 1 }, None)
                }
                _ => (0, None),
            },
        }
    };
    let cmp_held = |x: Option<Utility>, y: Option<Utility>| match (x, y) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    };
    *candidates
        .iter()
        .min_by(|&&x, &&y| {
            let (cx, hx) = rank(x);
            let (cy, hy) = rank(y);
            cx.cmp(&cy)
                .then_with(|| cmp_held(hx, hy))
                .then_with(|| prior_tiebreak(x, y))
        })
        .expect("candidate set is non-empty")
}

pub(crate) fn sequential_loop<R: Rng + ?Sized>(
    instance: &Instance,
    rng: &mut R,
    options: RunOptions,
    state: &mut RunState,
) -> Result<()> {
    let ceiling = ceiling_for(instance, &options)?;
    let n = instance.n();
    loop {
        let next = (0..n)
            .map(ApplicantId)
            .find(|&a| state.matching.position_of(a).is_none() && !state.rejections.exhausted(a));
        let Some(a) = next else {
            break;
        };
        state.iter += 1;

        let candidates = most_preferred(instance, &state.ledger, &state.rejections, ceiling, a);
        let p = select_position(instance, &state.ledger, &state.matching, &options, a, &candidates);
        let wanted = position_prefers_to_match(instance, &state.ledger, &state.matching, p, a);
        let met = state.ledger.contains(a, p);

        if !met && wanted {
            state.interview(instance, rng, a, p)?;
            state.close_round();
        } else if !wanted {
            state.rejections.insert(a, p);
            let kind = if met {
                EventKind::ProposalReject
            } else {
                EventKind::RejectWithoutInterview
            };
            state.push(kind, a, p, None, None);
        } else {
            let displaced = state.matching.pair(a, p);
            if let Some(d) = displaced {
                state.rejections.insert(d, p);
            }
            state.push(EventKind::ProposalAccept, a, p, None, displaced);
        }
    }
    Ok(())
}
