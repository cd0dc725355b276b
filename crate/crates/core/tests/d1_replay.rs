mod common;

use std::collections::BTreeSet;

use common::{oracle_interim_stable, pairs_1based};
use interview_match::harness::{d1_instance, run_rng};
use interview_match::run::EventKind;
use interview_match::sequential::run_sequential;
use interview_match::stability::{decoupled_da, DecouplingMode};
use interview_match::{ApplicantId, InterviewLedger, Matching, PositionId, RunOptions};

const SEQUENCE: [(usize, usize); 14] = [
    (1, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 1),
    (3, 2),
    (4, 3),
    (5, 5),
    (5, 2),
    (5, 1),
    (3, 5),
    (3, 1),
    (1, 5),
];

fn matching(pairs: &[(usize, usize)]) -> Matching {
    Matching::from_pairs(5, 5, pairs_1based(pairs)).unwrap()
}

#[test]
fn sequential_replays_the_worked_example() {
    let inst = d1_instance();
    let res = run_sequential(&inst, &mut run_rng(0), RunOptions::traced()).unwrap();
    assert_eq!(res.interview_sequence(), pairs_1based(&SEQUENCE));
    assert_eq!(
        res.matching,
        matching(&[(1, 5), (2, 4), (3, 1), (4, 3), (5, 2)])
    );
    assert_eq!(res.metrics.total_interviews, 14);
    assert_eq!(res.metrics.total_rounds, 14);
    assert!(oracle_interim_stable(&inst, &res.ledger, &res.matching));
}

#[test]
fn replay_does_not_depend_on_the_seed() {
    let inst = d1_instance();
    let a = run_sequential(&inst, &mut run_rng(1), RunOptions::default()).unwrap();
    let b = run_sequential(&inst, &mut run_rng(99), RunOptions::default()).unwrap();
    assert_eq!(a.interview_sequence(), b.interview_sequence());
    assert_eq!(a.matching, b.matching);
}

#[test]
fn full_interim_da_on_the_final_ledger_is_unstable() {
    let inst = d1_instance();
    let res = run_sequential(&inst, &mut run_rng(0), RunOptions::default()).unwrap();
    let (mu, report) = decoupled_da(&inst, &res.ledger, DecouplingMode::FullInterim).unwrap();
    assert_eq!(mu, matching(&[(1, 5), (2, 1), (3, 2), (4, 3), (5, 4)]));
    assert!(!report.is_interim_stable);
    assert_eq!(report.uninterviewed_matched_pairs, vec![(ApplicantId(4), PositionId(3))]);
    assert!(!oracle_interim_stable(&inst, &res.ledger, &mu));
}

#[test]
fn trace_is_consistent_with_the_ledger() {
    let inst = d1_instance();
    let res = run_sequential(&inst, &mut run_rng(0), RunOptions::traced()).unwrap();
    let trace = res.trace.as_ref().unwrap();

    let interviews: Vec<_> = trace
        .iter()
        .filter(|e| e.kind == EventKind::Interview)
        .map(|e| (e.applicant, e.position, e.v.unwrap(), e.u.unwrap()))
        .collect();
    let from_ledger: Vec<_> = res.ledger.records().iter().map(|r| (r.applicant, r.position, r.v, r.u)).collect();
    assert_eq!(interviews, from_ledger);

    // Iterations are numbered consecutively and each one does exactly one thing.
    for (k, e) in trace.iter().enumerate() {
        assert_eq!(e.iter, k + 1);
    }
    assert_eq!(res.metrics.iterations, trace.len());

    // Every accept follows an interview of that pair; every proposal reject
    // targets a met position.
    let mut met = BTreeSet::new();
    for e in trace {
        match e.kind {
            EventKind::Interview => {
                assert!(met.insert((e.applicant, e.position)));
            }
            EventKind::ProposalAccept | EventKind::ProposalReject => {
                assert!(met.contains(&(e.applicant, e.position)));
            }
            EventKind::RejectWithoutInterview => {
                assert!(!met.contains(&(e.applicant, e.position)));
            }
        }
    }
}

#[test]
fn each_prefix_of_the_ledger_replays_as_a_prefix() {
    let inst = d1_instance();
    let res = run_sequential(&inst, &mut run_rng(0), RunOptions::default()).unwrap();
    for len in 0..=14 {
        let prefix: InterviewLedger = res.ledger.prefix(len);
        assert_eq!(prefix.len(), len);
        let seq: Vec<_> = prefix.records().iter().map(|r| (r.applicant, r.position)).collect();
        assert_eq!(seq, pairs_1based(&SEQUENCE[..len]));
    }
}
