//! Mutable run state: the interview ledger, the matching and the record of
//! rejections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ApplicantId, PositionId};
use crate::model::Utility;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterviewRecord {
    pub applicant: ApplicantId,
    pub position: PositionId,
    /// Applicant's realized value for the position.
    pub v: Utility,
    /// Position's realized value for the applicant.
    pub u: Utility,
}

/// Append-only set of interview results. Each applicant–position pair
/// appears at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct InterviewLedger {
    n: usize,
    m: usize,
    records: Vec<InterviewRecord>,
    slot: Vec<Option<u32>>,
    per_applicant: Vec<u32>,
    per_position: Vec<u32>,
}

impl InterviewLedger {
    pub fn new(n: usize, m: usize) -> Self {
        InterviewLedger {
            n,
            m,
            records: Vec::new(),
            slot: vec![None; n * m],
            per_applicant: vec![0; n],
            per_position: vec![0; m],
        }
    }

    pub fn from_records(n: usize, m: usize, records: impl IntoIterator<Item = InterviewRecord>) -> Result<Self> {
        let mut ledger = Self::new(n, m);
        for r in records {
            ledger.insert(r)?;
        }
        Ok(ledger)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn insert(&mut self, record: InterviewRecord) -> Result<()> {
        let (a, p) = (record.applicant, record.position);
        if a.0 >= self.n || p.0 >= self.m {
            return Err(Error::OutOfRange {
                agent: if a.0 >= self.n { a.into() } else { p.into() },
                n: self.n,
                m: self.m,
            });
        }
        if !(record.v >= 0.0 && record.u >= 0.0 && record.v.is_finite() && record.u.is_finite()) {
            return Err(Error::InconsistentState(format!(
                "interview ({a}, {p}) has invalid values ({}, {})",
                record.v, record.u
            )));
        }
        let idx = a.0 * self.m + p.0;
        if self.slot[idx].is_some() {
            return Err(Error::DuplicateInterview(a, p));
        }
        self.slot[idx] = Some(self.records.len() as u32);
        self.records.push(record);
        self.per_applicant[a.0] += 1;
        self.per_position[p.0] += 1;
        Ok(())
    }

    #[inline]
    pub fn get(&self, a: ApplicantId, p: PositionId) -> Option<&InterviewRecord> {
        self.slot[a.0 * self.m + p.0].map(|k| &self.records[k as usize])
    }

    #[inline]
    pub fn contains(&self, a: ApplicantId, p: PositionId) -> bool {
        self.slot[a.0 * self.m + p.0].is_some()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.records.len() == self.n * self.m
    }

    /// Records in the order they were conducted.
    pub fn records(&self) -> &[InterviewRecord] {
        &self.records
    }

    pub fn applicant_count(&self, a: ApplicantId) -> usize {
        self.per_applicant[a.0] as usize
    }

    pub fn position_count(&self, p: PositionId) -> usize {
        self.per_position[p.0] as usize
    }

    pub fn per_applicant_counts(&self) -> Vec<usize> {
        self.per_applicant.iter().map(|&c| c as usize).collect()
    }

    pub fn per_position_counts(&self) -> Vec<usize> {
        self.per_position.iter().map(|&c| c as usize).collect()
    }

    /// Ledger holding only the first `len` records.
    pub fn prefix(&self, len: usize) -> Self {
        Self::from_records(self.n, self.m, self.records.iter().take(len).copied())
            .expect("a prefix of a valid ledger is valid")
    }
}

#[derive(Serialize, Deserialize)]
struct LedgerDoc {
    n: usize,
    m: usize,
    records: Vec<InterviewRecord>,
}

impl Serialize for InterviewLedger {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LedgerDoc {
            n: self.n,
            m: self.m,
            records: self.records.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InterviewLedger {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = LedgerDoc::deserialize(deserializer)?;
        InterviewLedger::from_records(doc.n, doc.m, doc.records).map_err(serde::de::Error::custom)
    }
}

/// A one-to-one partial pairing of applicants and positions. Both directions
/// are stored and kept consistent, so the matching is an involution by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    of_applicant: Vec<Option<PositionId>>,
    of_position: Vec<Option<ApplicantId>>,
}

impl Matching {
    pub fn empty(n: usize, m: usize) -> Self {
        Matching {
            of_applicant: vec![None; n],
            of_position: vec![None; m],
        }
    }

    /// Fails when an agent appears in more than one pair.
    pub fn from_pairs(n: usize, m: usize, pairs: impl IntoIterator<Item = (ApplicantId, PositionId)>) -> Result<Self> {
        let mut mu = Self::empty(n, m);
        for (a, p) in pairs {
            if a.0 >= n || p.0 >= m {
                return Err(Error::OutOfRange {
                    agent: if a.0 >= n { a.into() } else { p.into() },
                    n,
                    m,
                });
            }
            if mu.of_applicant[a.0].is_some() || mu.of_position[p.0].is_some() {
                return Err(Error::InconsistentState(format!(
                    "pair ({a}, {p}) reuses an agent that is already matched"
                )));
            }
            mu.pair(a, p);
        }
        Ok(mu)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.of_applicant.len(), self.of_position.len())
    }

    #[inline]
    pub fn position_of(&self, a: ApplicantId) -> Option<PositionId> {
        self.of_applicant[a.0]
    }

    #[inline]
    pub fn applicant_of(&self, p: PositionId) -> Option<ApplicantId> {
        self.of_position[p.0]
    }

    /// Pairs `a` with `p`, unmatching any previous partners of either.
    /// Returns the applicant `p` was holding, if any.
    pub fn pair(&mut self, a: ApplicantId, p: PositionId) -> Option<ApplicantId> {
        if let Some(old_p) = self.of_applicant[a.0].take() {
            self.of_position[old_p.0] = None;
        }
        let displaced = self.of_position[p.0].take();
        if let Some(d) = displaced {
            self.of_applicant[d.0] = None;
        }
        self.of_applicant[a.0] = Some(p);
        self.of_position[p.0] = Some(a);
        displaced
    }

    pub fn unmatch_applicant(&mut self, a: ApplicantId) {
        if let Some(p) = self.of_applicant[a.0].take() {
            self.of_position[p.0] = None;
        }
    }

    /// Matched pairs in ascending applicant order.
    pub fn pairs(&self) -> impl Iterator<Item = (ApplicantId, PositionId)> + '_ {
        self.of_applicant
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (ApplicantId(i), p)))
    }

    pub fn size(&self) -> usize {
        self.of_applicant.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_involution(&self) -> bool {
        self.of_applicant
            .iter()
            .enumerate()
            .all(|(i, p)| p.is_none_or(|p| self.of_position.get(p.0) == Some(&Some(ApplicantId(i)))))
            && self
                .of_position
                .iter()
                .enumerate()
                .all(|(j, a)| a.is_none_or(|a| self.of_applicant.get(a.0) == Some(&Some(PositionId(j)))))
    }
}

#[derive(Serialize, Deserialize)]
struct MatchingDoc {
    n: usize,
    m: usize,
    pairs: Vec<(ApplicantId, PositionId)>,
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (n, m) = self.dims();
        MatchingDoc {
            n,
            m,
            pairs: self.pairs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matching {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = MatchingDoc::deserialize(deserializer)?;
        Matching::from_pairs(doc.n, doc.m, doc.pairs).map_err(serde::de::Error::custom)
    }
}

/// Which positions have rejected which applicants. Only ever grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectionSet {
    m: usize,
    bits: Vec<bool>,
    per_applicant: Vec<u32>,
    len: usize,
}

impl RejectionSet {
    pub fn new(n: usize, m: usize) -> Self {
        RejectionSet {
            m,
            bits: vec![false; n * m],
            per_applicant: vec![0; n],
            len: 0,
        }
    }

    /// Returns true if the pair was not already present.
    pub fn insert(&mut self, a: ApplicantId, p: PositionId) -> bool {
        let slot = &mut self.bits[a.0 * self.m + p.0];
        if *slot {
            return false;
        }
        *slot = true;
        self.per_applicant[a.0] += 1;
        self.len += 1;
        true
    }

    #[inline]
    pub fn contains(&self, a: ApplicantId, p: PositionId) -> bool {
        self.bits[a.0 * self.m + p.0]
    }

    /// True once every position has rejected `a`.
    #[inline]
    pub fn exhausted(&self, a: ApplicantId) -> bool {
        self.per_applicant[a.0] as usize == self.m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ApplicantId, PositionId)> + '_ {
        let m = self.m;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(k, _)| (ApplicantId(k / m), PositionId(k % m)))
    }

    /// No pair is simultaneously matched and rejected.
    pub fn consistent_with(&self, matching: &Matching) -> bool {
        matching.pairs().all(|(a, p)| !self.contains(a, p))
    }
}

impl Serialize for RejectionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.pairs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(i: usize, j: usize) -> InterviewRecord {
        InterviewRecord {
            applicant: ApplicantId(i),
            position: PositionId(j),
            v: 0.3,
            u: 0.7,
        }
    }

    #[test]
    fn ledger_rejects_duplicate_pairs() {
        let mut z = InterviewLedger::new(2, 3);
        z.insert(rec(0, 1)).unwrap();
        assert!(matches!(z.insert(rec(0, 1)), Err(Error::DuplicateInterview(..))));
        assert_eq!(z.len(), 1);
        assert!(z.contains(ApplicantId(0), PositionId(1)));
        assert!(!z.contains(ApplicantId(1), PositionId(1)));
        assert_eq!(z.applicant_count(ApplicantId(0)), 1);
        assert_eq!(z.position_count(PositionId(1)), 1);
    }

    #[test]
    fn ledger_rejects_out_of_range_and_negative() {
        let mut z = InterviewLedger::new(2, 2);
        assert!(z.insert(rec(2, 0)).is_err());
        let mut bad = rec(0, 0);
        bad.v = -0.1;
        assert!(z.insert(bad).is_err());
    }

    #[test]
    fn pairing_displaces_previous_partners() {
        let mut mu = Matching::empty(3, 3);
        assert_eq!(mu.pair(ApplicantId(0), PositionId(0)), None);
        assert_eq!(mu.pair(ApplicantId(1), PositionId(0)), Some(ApplicantId(0)));
        assert_eq!(mu.position_of(ApplicantId(0)), None);
        mu.pair(ApplicantId(1), PositionId(2));
        assert_eq!(mu.applicant_of(PositionId(0)), None);
        assert!(mu.is_involution());
        assert_eq!(mu.size(), 1);
    }

    #[test]
    fn from_pairs_rejects_reuse() {
        let pairs = [(ApplicantId(0), PositionId(0)), (ApplicantId(1), PositionId(0))];
        assert!(Matching::from_pairs(2, 2, pairs).is_err());
    }

    #[test]
    fn matching_json_is_one_based() {
        let mu = Matching::from_pairs(2, 3, [(ApplicantId(1), PositionId(2))]).unwrap();
        let text = serde_json::to_string(&mu).unwrap();
        assert_eq!(text, r#"{"n":2,"m":3,"pairs":[[2,3]]}"#);
        let back: Matching = serde_json::from_str(&text).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn rejection_exhaustion() {
        let mut r = RejectionSet::new(2, 2);
        assert!(r.insert(ApplicantId(0), PositionId(0)));
        assert!(!r.insert(ApplicantId(0), PositionId(0)));
        assert!(!r.exhausted(ApplicantId(0)));
        r.insert(ApplicantId(0), PositionId(1));
        assert!(r.exhausted(ApplicantId(0)));
        assert_eq!(r.len(), 2);
    }
}
