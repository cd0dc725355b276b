//! Interim view of the market: what each agent believes given the interviews
//! conducted so far.
//!
//! An agent's interim utility for a partner is the realized interview value
//! when the pair has interviewed and the prior expectation otherwise. All
//! comparisons are strict; equal utilities express no preference. Being
//! unmatched (`None`) ranks strictly below every partner.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ids::{AgentId, ApplicantId, PositionId};
use crate::model::{Instance, Utility};
use crate::state::{InterviewLedger, InterviewRecord, Matching};

#[inline]
pub fn applicant_utility(instance: &Instance, ledger: &InterviewLedger, a: ApplicantId, p: PositionId) -> Utility {
    match ledger.get(a, p) {
        Some(r) => r.v,
        None => instance.applicant_prior(a, p),
    }
}

#[inline]
pub fn position_utility(instance: &Instance, ledger: &InterviewLedger, p: PositionId, a: ApplicantId) -> Utility {
    match ledger.get(a, p) {
        Some(r) => r.u,
        None => instance.position_prior(p, a),
    }
}

/// Position `p`'s interim value for whoever it currently holds; `None` when
/// it holds nobody.
#[inline]
pub fn held_value(instance: &Instance, ledger: &InterviewLedger, matching: &Matching, p: PositionId) -> Option<Utility> {
    matching
        .applicant_of(p)
        .map(|a| position_utility(instance, ledger, p, a))
}

/// Does `p` strictly prefer `a` to its current match?
#[inline]
pub fn position_prefers_to_match(
    instance: &Instance,
    ledger: &InterviewLedger,
    matching: &Matching,
    p: PositionId,
    a: ApplicantId,
) -> bool {
    match held_value(instance, ledger, matching, p) {
        None => true,
        Some(held) => position_utility(instance, ledger, p, a) > held,
    }
}

fn check_agent(instance: &Instance, agent: AgentId) -> Result<()> {
    match agent {
        AgentId::Applicant(a) => instance.check_applicant(a),
        AgentId::Position(p) => instance.check_position(p),
    }
}

fn opposite_pair(viewer: AgentId, target: AgentId) -> Result<(ApplicantId, PositionId)> {
    match (viewer, target) {
        (AgentId::Applicant(a), AgentId::Position(p)) | (AgentId::Position(p), AgentId::Applicant(a)) => Ok((a, p)),
        _ => Err(Error::SameSide { viewer, target }),
    }
}

/// `viewer`'s interim utility for `target`.
pub fn interim_utility(instance: &Instance, ledger: &InterviewLedger, viewer: AgentId, target: AgentId) -> Result<Utility> {
    check_agent(instance, viewer)?;
    check_agent(instance, target)?;
    let (a, p) = opposite_pair(viewer, target)?;
    Ok(match viewer {
        AgentId::Applicant(_) => applicant_utility(instance, ledger, a, p),
        AgentId::Position(_) => position_utility(instance, ledger, p, a),
    })
}

/// Strict interim preference of `viewer` for `first` over `second`, where
/// `None` stands for remaining unmatched.
pub fn interim_prefers(
    instance: &Instance,
    ledger: &InterviewLedger,
    viewer: AgentId,
    first: Option<AgentId>,
    second: Option<AgentId>,
) -> Result<bool> {
    let score = |t: Option<AgentId>| -> Result<Option<Utility>> {
        t.map(|t| interim_utility(instance, ledger, viewer, t)).transpose()
    };
    let (x, y) = (score(first)?, score(second)?);
    Ok(match (x, y) {
        (Some(x), Some(y)) => x > y,
        (Some(_), None) => true,
        (None, _) => false,
    })
}

/// Whether `viewer`'s realized value for `target` strictly exceeds the prior
/// expectation. Only defined for pairs that have interviewed.
pub fn interim_likes(instance: &Instance, ledger: &InterviewLedger, viewer: AgentId, target: AgentId) -> Result<bool> {
    check_agent(instance, viewer)?;
    check_agent(instance, target)?;
    let (a, p) = opposite_pair(viewer, target)?;
    let record = ledger.get(a, p).ok_or(Error::NotInterviewed(a, p))?;
    Ok(match viewer {
        AgentId::Applicant(_) => record.v > instance.applicant_prior(a, p),
        AgentId::Position(_) => record.u > instance.position_prior(p, a),
    })
}

/// Realizes both values of a fresh interview and appends it to the ledger.
pub fn conduct_interview<R: Rng + ?Sized>(
    instance: &Instance,
    ledger: &mut InterviewLedger,
    rng: &mut R,
    a: ApplicantId,
    p: PositionId,
) -> Result<InterviewRecord> {
    instance.check_applicant(a)?;
    instance.check_position(p)?;
    if ledger.contains(a, p) {
        return Err(Error::DuplicateInterview(a, p));
    }
    let (v, u) = instance.realize(a, p, rng)?;
    let record = InterviewRecord {
        applicant: a,
        position: p,
        v,
        u,
    };
    ledger.insert(record)?;
    Ok(record)
}
