use num_rational::Rational64;
use proptest::prelude::*;

use credence::credibility::updated_score;
use credence::dst::{
    combine, combine_all, estimated_trust, mass_from_recommendation, MassFunction,
};
use credence::incentives::{replenishment, InquiryLedger};
use credence::learner::{fold_indices, train_tree, AdvisorDataset, InteractionRecord, TreeParams};
use credence::{AgentId, BeliefTriple, IdGenerator, Probability, Verdict};

fn mass() -> impl Strategy<Value = MassFunction<f64>> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        MassFunction::new(lo, hi - lo, 1.0 - hi).unwrap()
    })
}

fn exact_mass() -> impl Strategy<Value = MassFunction<Rational64>> {
    (0..=64i64)
        .prop_flat_map(|t| (Just(t), 0..=64 - t))
        .prop_map(|(t, n)| {
            MassFunction::new(
                Rational64::new(t, 64),
                Rational64::new(n, 64),
                Rational64::new(64 - t - n, 64),
            )
            .unwrap()
        })
}

fn verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::Trustworthy), Just(Verdict::Untrustworthy)]
}

fn beliefs() -> impl Strategy<Value = BeliefTriple> {
    mass().prop_map(BeliefTriple::from)
}

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

proptest! {
    #[test]
    fn combination_is_normalized_and_commutative(a in mass(), b in mass()) {
        let ab = combine(&a, &b).unwrap();
        let ba = combine(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        let sum: f64 = ab.as_f64().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9);
        prop_assert!(ab.as_f64().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn fold_order_does_not_matter(masses in prop::collection::vec(mass(), 2..8), rot in 0usize..8) {
        let reference = combine_all(&masses).unwrap().as_f64();
        let mut rotated = masses.clone();
        rotated.rotate_left(rot % masses.len());
        rotated.reverse();
        let other = combine_all(&rotated).unwrap().as_f64();
        for i in 0..3 {
            prop_assert!((reference[i] - other[i]).abs() <= 1e-9);
        }
    }

    #[test]
    fn exact_combination_is_associative(a in exact_mass(), b in exact_mass(), c in exact_mass()) {
        let left = combine(&a, &b).and_then(|ab| combine(&ab.into(), &c));
        let right = combine(&b, &c).and_then(|bc| combine(&a, &bc.into()));
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert_eq!(l, r);
            prop_assert_eq!(l.trust() + l.distrust() + l.uncertainty(), Rational64::from_integer(1));
        }
    }

    #[test]
    fn vacuous_mass_is_neutral_exactly(a in exact_mass()) {
        let out = combine(&a, &MassFunction::vacuous()).unwrap();
        prop_assert_eq!(MassFunction::from(out), a);
    }

    #[test]
    fn recommendations_never_conflict_totally(
        votes in prop::collection::vec((verdict(), 0.0..=1.0f64), 1..40),
    ) {
        let masses: Vec<_> = votes.iter().map(|&(v, c)| mass_from_recommendation(v, p(c))).collect();
        let beliefs = combine_all(&masses).unwrap();
        let trust = estimated_trust(&beliefs).value();
        prop_assert!((0.0..=1.0).contains(&trust));
    }

    #[test]
    fn credibility_stays_in_range(phi in 0.0..=1.0f64, v in verdict(), b in beliefs()) {
        let next = updated_score(p(phi), v, &b).value();
        prop_assert!((0.0..=1.0).contains(&next));
    }

    #[test]
    fn agreement_never_lowers_credibility(phi in 0.0..=1.0f64, b in beliefs()) {
        prop_assume!(b.trust() != b.distrust());
        let winner = if b.trust() > b.distrust() { Verdict::Trustworthy } else { Verdict::Untrustworthy };
        prop_assert!(updated_score(p(phi), winner, &b).value() >= phi);
    }

    #[test]
    fn dissent_is_penalized_unless_loser_belief_is_large(phi in 0.0..=1.0f64, b in beliefs()) {
        prop_assume!(b.trust() > b.distrust());
        let next = updated_score(p(phi), Verdict::Untrustworthy, &b).value();
        prop_assert_eq!(next, (phi - b.distrust()).abs());
        if b.distrust() > 0.0 && b.distrust() < 2.0 * phi {
            prop_assert!(next < phi);
        }
    }

    #[test]
    fn ties_leave_credibility_alone(phi in 0.0..=1.0f64, half in 0.0..=0.5f64, v in verdict()) {
        let b = BeliefTriple::new(half, half, 1.0 - 2.0 * half).unwrap();
        prop_assert_eq!(updated_score(p(phi), v, &b).value(), phi);
    }

    #[test]
    fn replenishment_matches_integer_ceiling(answered in 0u64..10_000, per_mille in 0u64..=1000) {
        let gain = replenishment(answered, p(per_mille as f64 / 1000.0));
        prop_assert_eq!(gain, answered + (answered * per_mille).div_ceil(1000) + 1);
    }

    #[test]
    fn higher_credibility_never_earns_less(answered in 1u64..1000, a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(replenishment(answered, p(hi)) >= replenishment(answered, p(lo)));
    }

    #[test]
    fn budgets_never_shrink_on_replenish(answers in prop::collection::vec((0u64..4, 0u64..4), 0..30), cr in 0.0..=1.0f64) {
        let id = AgentId::from_raw;
        let mut ledger = InquiryLedger::new(5, 1);
        for x in 0..4 {
            for s in 0..4 {
                ledger.open(id(x), id(10 + s));
            }
        }
        for &(x, s) in &answers {
            ledger.record_answer(id(x), id(10 + s));
        }
        let before: Vec<u64> = (0..4).flat_map(|x| (0..4).map(move |s| (x, s)))
            .map(|(x, s)| ledger.remaining(id(x), id(10 + s))).collect();
        ledger.replenish(|_, _| p(cr));
        let after: Vec<u64> = (0..4).flat_map(|x| (0..4).map(move |s| (x, s)))
            .map(|(x, s)| ledger.remaining(id(x), id(10 + s))).collect();
        for (i, (b, a)) in before.iter().zip(&after).enumerate() {
            let (x, s) = (i as u64 / 4, i as u64 % 4);
            let e = answers.iter().filter(|&&pair| pair == (x, s)).count() as u64;
            prop_assert_eq!(*a, b + replenishment(e, p(cr)));
        }
    }

    #[test]
    fn folds_partition_the_records(n in 1usize..200, k in 1usize..20, seed in any::<u64>()) {
        let folds = fold_indices(n, k, seed);
        prop_assert_eq!(folds.len(), k);
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn unbounded_tree_fits_consistent_data(
        rows in prop::collection::btree_map((0u8..8, 0u8..8), verdict(), 1..40),
    ) {
        let records: Vec<_> = rows
            .iter()
            .map(|(&(a, b), &v)| InteractionRecord::new(vec![a as f64, b as f64], v))
            .collect();
        let data = AdvisorDataset::from_records(vec!["a".into(), "b".into()], records).unwrap();
        let tree = train_tree(&data, TreeParams::unbounded()).unwrap();
        prop_assert_eq!(tree.accuracy_on(&data).unwrap(), 1.0);
    }

    #[test]
    fn ids_serialize_without_lineage(count in 1usize..20) {
        let mut ids = IdGenerator::new();
        let principal = ids.fresh(None).unwrap();
        for _ in 0..count {
            let fake = ids.fresh(Some(principal)).unwrap();
            let json = serde_json::to_string(&fake).unwrap();
            prop_assert_eq!(&json, &fake.raw().to_string());
            let back: AgentId = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, fake);
            prop_assert_eq!(back.lineage(), None);
            prop_assert_ne!(fake, principal);
        }
    }
}
