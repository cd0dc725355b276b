//! Applicant-proposing deferred acceptance, on explicit preference profiles
//! and on applicants' truncated interim preferences.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ids::{ApplicantId, PositionId};
use crate::interim::{applicant_utility, position_utility};
use crate::model::{Instance, Utility};
use crate::state::{InterviewLedger, Matching, RejectionSet};

/// Applicants list acceptable positions best first. Positions score
/// applicants; a higher score is strictly better, equal scores express no
/// preference, and `f64::NEG_INFINITY` marks an unacceptable applicant.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceProfile {
    applicant_orders: Vec<Vec<PositionId>>,
    position_scores: Grid<f64>,
}

impl PreferenceProfile {
    /// `position_scores` is m×n.
    pub fn new(applicant_orders: Vec<Vec<PositionId>>, position_scores: Grid<f64>) -> Result<Self> {
        let n = applicant_orders.len();
        let m = position_scores.rows();
        if position_scores.cols() != n {
            return Err(Error::InvalidInstance(format!(
                "position scores cover {} applicants, orders cover {n}",
                position_scores.cols()
            )));
        }
        let mut seen = vec![usize::MAX; m];
        for (i, order) in applicant_orders.iter().enumerate() {
            for &p in order {
                if p.0 >= m {
                    return Err(Error::OutOfRange { agent: p.into(), n, m });
                }
                if seen[p.0] == i {
                    return Err(Error::InvalidInstance(format!(
                        "{p} listed twice by {}",
                        ApplicantId(i)
                    )));
                }
                seen[p.0] = i;
            }
        }
        if position_scores.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidInstance("position scores contain NaN".into()));
        }
        Ok(PreferenceProfile {
            applicant_orders,
            position_scores,
        })
    }

    /// Profile from strict rank lists on both sides. Applicants missing from a
    /// position's list are unacceptable to it.
    pub fn from_rankings(applicant_orders: Vec<Vec<PositionId>>, position_orders: &[Vec<ApplicantId>]) -> Result<Self> {
        let n = applicant_orders.len();
        let m = position_orders.len();
        let mut scores = Grid::filled(m, n, f64::NEG_INFINITY);
        for (j, order) in position_orders.iter().enumerate() {
            for (rank, &a) in order.iter().enumerate() {
                if a.0 >= n {
                    return Err(Error::OutOfRange { agent: a.into(), n, m });
                }
                *scores.get_mut(j, a.0) = (order.len() - rank) as f64;
            }
        }
        Self::new(applicant_orders, scores)
    }

    pub fn n(&self) -> usize {
        self.applicant_orders.len()
    }

    pub fn m(&self) -> usize {
        self.position_scores.rows()
    }

    pub fn order(&self, a: ApplicantId) -> &[PositionId] {
        &self.applicant_orders[a.0]
    }

    #[inline]
    pub fn score(&self, p: PositionId, a: ApplicantId) -> f64 {
        *self.position_scores.get(p.0, a.0)
    }

    /// Does `p` strictly prefer `a` to `held` (`None` = unmatched)?
    #[inline]
    pub fn position_prefers(&self, p: PositionId, a: ApplicantId, held: Option<ApplicantId>) -> bool {
        let s = self.score(p, a);
        if s == f64::NEG_INFINITY {
            return false;
        }
        match held {
            None => true,
            Some(h) => s > self.score(p, h),
        }
    }

    /// Does `a` strictly prefer `p` to `current`? Unlisted positions are
    /// unacceptable.
    pub fn applicant_prefers(&self, a: ApplicantId, p: PositionId, current: Option<PositionId>) -> bool {
        let order = self.order(a);
        let Some(rank_p) = order.iter().position(|&q| q == p) else {
            return false;
        };
        match current {
            None => true,
            Some(c) => order.iter().position(|&q| q == c).is_none_or(|rank_c| rank_p < rank_c),
        }
    }
}

/// One proposal outcome inside a DA pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaStep {
    Accept {
        applicant: ApplicantId,
        position: PositionId,
        displaced: Option<ApplicantId>,
    },
    Reject {
        applicant: ApplicantId,
        position: PositionId,
    },
}

/// Runs applicant-proposing DA from `initial`.
///
/// Unmatched applicants are taken in ascending index; each proposes down her
/// list to positions that have not yet rejected her. A displaced applicant
/// is recorded as rejected by the position that released her and proposes
/// next. Every rejection is added to `rejections`.
pub fn applicant_proposing_da(
    profile: &PreferenceProfile,
    initial: Matching,
    rejections: &mut RejectionSet,
) -> Result<Matching> {
    let mut matching = initial;
    run_da(profile, &mut matching, rejections, &mut |_| {})?;
    Ok(matching)
}

pub(crate) fn run_da(
    profile: &PreferenceProfile,
    matching: &mut Matching,
    rejections: &mut RejectionSet,
    on_step: &mut dyn FnMut(DaStep),
) -> Result<()> {
    let (n, m) = (profile.n(), profile.m());
    if matching.dims() != (n, m) {
        return Err(Error::InconsistentState(format!(
            "matching is {:?}, profile is {:?}",
            matching.dims(),
            (n, m)
        )));
    }
    if !matching.is_involution() {
        return Err(Error::InconsistentState("initial matching is not an involution".into()));
    }
    if !rejections.consistent_with(matching) {
        return Err(Error::InconsistentState(
            "a matched pair is recorded as rejected".into(),
        ));
    }

    let mut cursor = vec![0usize; n];
    for start in 0..n {
        let mut proposer = ApplicantId(start);
        if matching.position_of(proposer).is_some() {
            continue;
        }
        loop {
            let order = profile.order(proposer);
            let cur = &mut cursor[proposer.0];
            while *cur < order.len() && rejections.contains(proposer, order[*cur]) {
                *cur += 1;
            }
            let Some(&p) = order.get(*cur) else {
                break;
            };
            let held = matching.applicant_of(p);
            if profile.position_prefers(p, proposer, held) {
                let displaced = matching.pair(proposer, p);
                on_step(DaStep::Accept {
                    applicant: proposer,
                    position: p,
                    displaced,
                });
                match displaced {
                    Some(d) => {
                        rejections.insert(d, p);
                        proposer = d;
                    }
                    None => break,
                }
            } else {
                rejections.insert(proposer, p);
                on_step(DaStep::Reject {
                    applicant: proposer,
                    position: p,
                });
            }
        }
    }
    Ok(())
}

/// Positions sorted by `a`'s interim utility, best first, ties by index.
pub fn interim_order(instance: &Instance, ledger: &InterviewLedger, a: ApplicantId) -> Vec<(PositionId, Utility)> {
    let mut order: Vec<(PositionId, Utility)> = (0..instance.m())
        .map(PositionId)
        .map(|p| (p, applicant_utility(instance, ledger, a, p)))
        .collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    order
}

pub(crate) fn interim_position_scores(instance: &Instance, ledger: &InterviewLedger) -> Grid<f64> {
    Grid::from_fn(instance.m(), instance.n(), |j, i| {
        position_utility(instance, ledger, PositionId(j), ApplicantId(i))
    })
}

/// Profile of full interim preferences on both sides.
pub fn interim_profile(instance: &Instance, ledger: &InterviewLedger) -> PreferenceProfile {
    let orders = (0..instance.n())
        .map(|i| {
            interim_order(instance, ledger, ApplicantId(i))
                .into_iter()
                .map(|(p, _)| p)
                .collect()
        })
        .collect();
    PreferenceProfile::new(orders, interim_position_scores(instance, ledger))
        .expect("interim orders are permutations")
}

/// `a`'s interim order cut just above her best position that she has neither
/// interviewed with nor been rejected by. Only strictly better positions
/// remain, so every listed position has interviewed her. With no such
/// position left the order is kept whole.
pub fn truncated_order(
    instance: &Instance,
    ledger: &InterviewLedger,
    rejections: &RejectionSet,
    a: ApplicantId,
) -> Vec<PositionId> {
    let order = interim_order(instance, ledger, a);
    let pivot = order
        .iter()
        .find(|(p, _)| !ledger.contains(a, *p) && !rejections.contains(a, *p))
        .map(|&(_, u)| u);
    order
        .into_iter()
        .filter(|&(_, u)| pivot.is_none_or(|pv| u > pv))
        .map(|(p, _)| p)
        .collect()
}

/// Profile for one truncated DA pass.
pub fn truncated_profile(instance: &Instance, ledger: &InterviewLedger, rejections: &RejectionSet) -> PreferenceProfile {
    let orders = (0..instance.n())
        .map(|i| truncated_order(instance, ledger, rejections, ApplicantId(i)))
        .collect();
    PreferenceProfile::new(orders, interim_position_scores(instance, ledger))
        .expect("truncated orders are sub-permutations")
}

/// One DA pass on truncated interim preferences, continuing from `matching`
/// and the run's accumulated rejections.
pub fn truncated_da(
    instance: &Instance,
    ledger: &InterviewLedger,
    matching: Matching,
    rejections: &mut RejectionSet,
) -> Result<Matching> {
    let profile = truncated_profile(instance, ledger, rejections);
    applicant_proposing_da(&profile, matching, rejections)
}
