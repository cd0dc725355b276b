//! Interim-stability verification and DA decoupled from interview
//! scheduling.

use serde::{Deserialize, Serialize};

use crate::da::{applicant_proposing_da, interim_position_scores, interim_profile, PreferenceProfile};
use crate::error::{Error, Result};
use crate::ids::{ApplicantId, PositionId};
use crate::interim::{applicant_utility, position_prefers_to_match};
use crate::model::Instance;
use crate::state::{InterviewLedger, Matching, RejectionSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub is_interim_stable: bool,
    pub uninterviewed_matched_pairs: Vec<(ApplicantId, PositionId)>,
    pub blocking_pairs: Vec<(ApplicantId, PositionId)>,
}

/// Exhaustive check: every matched pair must have interviewed, and no
/// applicant–position pair may strictly prefer each other (under interim
/// utilities) to their current assignments.
pub fn check_interim_stability(instance: &Instance, ledger: &InterviewLedger, matching: &Matching) -> Result<StabilityReport> {
    let dims = (instance.n(), instance.m());
    if matching.dims() != dims || ledger.dims() != dims {
        return Err(Error::InconsistentState("matching or ledger does not fit the instance".into()));
    }
    if !matching.is_involution() {
        return Err(Error::InconsistentState("matching is not an involution".into()));
    }
    let uninterviewed_matched_pairs: Vec<_> = matching.pairs().filter(|&(a, p)| !ledger.contains(a, p)).collect();

    let mut blocking_pairs = Vec::new();
    for a in (0..instance.n()).map(ApplicantId) {
        let current = matching.position_of(a);
        let held = current.map(|q| applicant_utility(instance, ledger, a, q));
        for p in (0..instance.m()).map(PositionId) {
            if current == Some(p) {
                continue;
            }
            let applicant_wants = held.is_none_or(|h| applicant_utility(instance, ledger, a, p) > h);
            if applicant_wants && position_prefers_to_match(instance, ledger, matching, p, a) {
                blocking_pairs.push((a, p));
            }
        }
    }
    Ok(StabilityReport {
        is_interim_stable: uninterviewed_matched_pairs.is_empty() && blocking_pairs.is_empty(),
        uninterviewed_matched_pairs,
        blocking_pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecouplingMode {
    /// Applicants rank every position by interim utility.
    FullInterim,
    /// Applicants rank only the positions they interviewed, by realized value.
    RealizedOnly,
}

/// Applicant-proposing DA from the empty matching on preferences induced by
/// a finished ledger, plus the interim-stability report of its output.
pub fn decoupled_da(instance: &Instance, ledger: &InterviewLedger, mode: DecouplingMode) -> Result<(Matching, StabilityReport)> {
    let (n, m) = (instance.n(), instance.m());
    let profile = match mode {
        DecouplingMode::FullInterim => interim_profile(instance, ledger),
        DecouplingMode::RealizedOnly => {
            let orders = (0..n)
                .map(ApplicantId)
                .map(|a| {
                    let mut met: Vec<(PositionId, f64)> = ledger
                        .records()
                        .iter()
                        .filter(|r| r.applicant == a)
                        .map(|r| (r.position, r.v))
                        .collect();
                    met.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
                    met.into_iter().map(|(p, _)| p).collect()
                })
                .collect();
            PreferenceProfile::new(orders, interim_position_scores(instance, ledger))?
        }
    };
    let mut rejections = RejectionSet::new(n, m);
    let matching = applicant_proposing_da(&profile, Matching::empty(n, m), &mut rejections)?;
    let report = check_interim_stability(instance, ledger, &matching)?;
    Ok((matching, report))
}

/// Whether every matched applicant's realized value for her match strictly
/// exceeds her prior for it. Unmatched applicants are ignored.
pub fn all_applicants_like_match(instance: &Instance, ledger: &InterviewLedger, matching: &Matching) -> Result<bool> {
    let mut all = true;
    for (a, p) in matching.pairs() {
        let record = ledger.get(a, p).ok_or(Error::NotInterviewed(a, p))?;
        all &= record.v > instance.applicant_prior(a, p);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::InterviewRecord;

    #[test]
    fn empty_matching_with_priors_is_fully_blocked() {
        let inst = Instance::bilateral_uniform(3, 4).unwrap();
        let z = InterviewLedger::new(3, 4);
        let report = check_interim_stability(&inst, &z, &Matching::empty(3, 4)).unwrap();
        assert!(!report.is_interim_stable);
        assert_eq!(report.blocking_pairs.len(), 12);
        assert!(report.uninterviewed_matched_pairs.is_empty());
    }

    #[test]
    fn like_check() {
        let inst = Instance::bilateral_uniform(2, 2).unwrap();
        let z = InterviewLedger::from_records(
            2,
            2,
            [
                InterviewRecord {
                    applicant: ApplicantId(0),
                    position: PositionId(0),
                    v: 0.7,
                    u: 0.1,
                },
                InterviewRecord {
                    applicant: ApplicantId(1),
                    position: PositionId(1),
                    v: 0.4,
                    u: 0.9,
                },
            ],
        )
        .unwrap();
        assert!(all_applicants_like_match(&inst, &z, &Matching::empty(2, 2)).unwrap());
        let one = Matching::from_pairs(2, 2, [(ApplicantId(0), PositionId(0))]).unwrap();
        assert!(all_applicants_like_match(&inst, &z, &one).unwrap());
        let both = Matching::from_pairs(2, 2, [(ApplicantId(0), PositionId(0)), (ApplicantId(1), PositionId(1))]).unwrap();
        assert!(!all_applicants_like_match(&inst, &z, &both).unwrap());
        let unmet = Matching::from_pairs(2, 2, [(ApplicantId(0), PositionId(1))]).unwrap();
        assert!(matches!(
            all_applicants_like_match(&inst, &z, &unmet),
            Err(Error::NotInterviewed(..))
        ));
    }
}
