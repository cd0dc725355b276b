mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::oracle_interim_stable;
use interview_match::harness::{generate_instance, run_rng, Algorithm, GeneratorParams};
use interview_match::run::EventKind;
use interview_match::{check_interim_stability, ModelKind, RunOptions, RunResult, SelectionRule};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = ModelKind> {
    prop_oneof![
        Just(ModelKind::BilateralUniform),
        Just(ModelKind::TwoPointOrdered),
        Just(ModelKind::PositionsEquivalentUniform),
        Just(ModelKind::AlmostEquivalent4Point),
    ]
}

fn algorithm_strategy() -> impl Strategy<Value = Algorithm> {
    prop_oneof![Just(Algorithm::Sequential), Just(Algorithm::Hybrid), Just(Algorithm::FullyParallel)]
}

fn assert_structural(res: &RunResult, n: usize, m: usize) {
    let z = &res.ledger;
    let mut seen = BTreeSet::new();
    for r in z.records() {
        assert!(seen.insert((r.applicant, r.position)), "duplicate interview");
    }
    assert_eq!(res.metrics.per_applicant_interviews.iter().sum::<usize>(), z.len());
    assert_eq!(res.metrics.per_position_interviews.iter().sum::<usize>(), z.len());
    assert!(res.matching.is_involution());
    assert_eq!(res.matching.dims(), (n, m));
    for (a, p) in res.matching.pairs() {
        assert!(z.contains(a, p), "matched without interview");
        assert!(!res.rejections.contains(a, p));
    }
    // One interview per agent per round.
    if let Some(trace) = &res.trace {
        let mut rounds: BTreeMap<Option<usize>, (BTreeSet<_>, BTreeSet<_>)> = BTreeMap::new();
        for e in trace.iter().filter(|e| e.kind == EventKind::Interview) {
            let Some(round) = e.round else { continue };
            let slot = rounds.entry(Some(round)).or_default();
            assert!(slot.0.insert(e.applicant), "applicant twice in round {round}");
            assert!(slot.1.insert(e.position), "position twice in round {round}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn outputs_are_interim_stable(
        kind in kind_strategy(),
        algorithm in algorithm_strategy(),
        n in 2usize..9,
        extra in 0usize..6,
        seed in any::<u64>(),
    ) {
        let m = n + extra;
        let inst = generate_instance(kind, n, m, &GeneratorParams::default(), seed).unwrap();
        let res = algorithm.run(&inst, &mut run_rng(seed), RunOptions::traced()).unwrap();
        assert_structural(&res, n, m);
        let report = check_interim_stability(&inst, &res.ledger, &res.matching).unwrap();
        prop_assert!(report.is_interim_stable);
        prop_assert!(oracle_interim_stable(&inst, &res.ledger, &res.matching));
    }

    #[test]
    fn sequential_handles_more_applicants_than_positions(
        n in 3usize..10,
        short in 1usize..3,
        seed in any::<u64>(),
        selection in prop_oneof![Just(SelectionRule::LowestHeldValue), Just(SelectionRule::UnmatchedThenUnliked)],
    ) {
        let m = (n - short).max(2);
        let inst = generate_instance(ModelKind::BilateralUniform, n, m, &GeneratorParams::default(), seed).unwrap();
        let opts = RunOptions { selection, ..RunOptions::traced() };
        let res = Algorithm::Sequential.run(&inst, &mut run_rng(seed), opts).unwrap();
        assert_structural(&res, n, m);
        prop_assert_eq!(res.matching.size(), m);
        prop_assert_eq!(res.metrics.exhausted_applicants, n - m);
        prop_assert!(oracle_interim_stable(&inst, &res.ledger, &res.matching));
    }

    #[test]
    fn ceiling_variant_is_stable(n in 2usize..8, extra in 0usize..4, seed in any::<u64>(), algorithm in algorithm_strategy()) {
        let m = n + extra;
        let inst = generate_instance(ModelKind::AlmostEquivalent4Point, n, m, &GeneratorParams::default(), seed).unwrap();
        let opts = RunOptions { uninterviewed_ceiling: true, ..RunOptions::traced() };
        let res = algorithm.run(&inst, &mut run_rng(seed), opts).unwrap();
        assert_structural(&res, n, m);
        prop_assert!(oracle_interim_stable(&inst, &res.ledger, &res.matching));
    }

    #[test]
    fn runs_are_reproducible(kind in kind_strategy(), n in 2usize..7, seed in any::<u64>(), algorithm in algorithm_strategy()) {
        let inst = generate_instance(kind, n, n + 1, &GeneratorParams::default(), seed).unwrap();
        let a = algorithm.run(&inst, &mut run_rng(seed), RunOptions::default()).unwrap();
        let b = algorithm.run(&inst, &mut run_rng(seed), RunOptions::default()).unwrap();
        prop_assert_eq!(a.ledger.records(), b.ledger.records());
        prop_assert_eq!(a.matching, b.matching);
        prop_assert_eq!(a.metrics, b.metrics);
    }

    #[test]
    fn sequential_rounds_equal_interviews(n in 2usize..10, seed in any::<u64>()) {
        let inst = generate_instance(ModelKind::BilateralUniform, n, n, &GeneratorParams::default(), seed).unwrap();
        let res = Algorithm::Sequential.run(&inst, &mut run_rng(seed), RunOptions::default()).unwrap();
        prop_assert_eq!(res.metrics.total_rounds, res.metrics.total_interviews);
        prop_assert_eq!(res.matching.size(), n);
    }

    #[test]
    fn hybrid_phase_rounds_add_up(n in 2usize..12, extra in 0usize..40, seed in any::<u64>()) {
        let m = n + extra;
        let inst = generate_instance(ModelKind::BilateralUniform, n, m, &GeneratorParams::default(), seed).unwrap();
        let res = Algorithm::Hybrid.run(&inst, &mut run_rng(seed), RunOptions::default()).unwrap();
        let ph = res.metrics.phases.unwrap();
        prop_assert_eq!(ph.phase1 + ph.phase2 + ph.phase3, res.metrics.total_rounds);
        if res.metrics.fallback_triggered {
            prop_assert_eq!(ph.phase2, 0);
            prop_assert_eq!(ph.phase3, m);
            prop_assert!(res.ledger.is_complete());
        } else {
            prop_assert_eq!(ph.phase3, 0);
        }
    }
}
