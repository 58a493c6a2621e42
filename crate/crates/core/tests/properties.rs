//! Property tests for the combinatorial core and the record schema.

use cusumlab::combinatorics::{
    binomial, coset, elementary_symmetric, extended_binomial, k_subsets, IndexSet,
};
use cusumlab::muirhead::{submajorizes, Configuration, CusumSubscript, OddsVector};
use cusumlab::record::{from_jsonl, sort_records, to_jsonl, ScenarioMeta, Verdict, VerificationRecord};
use cusumlab::rng::{draw_configuration, draw_odds, SplitMix64};
use cusumlab::scalar::{format_rational, int, parse_rational, rat, ExactScalar};
use num_traits::Zero;
use proptest::prelude::*;

fn esym_by_enumeration(values: &[ExactScalar], degree: usize) -> ExactScalar {
    if degree == 0 {
        return int(1);
    }
    if degree > values.len() {
        return ExactScalar::zero();
    }
    let labels: Vec<usize> = (1..=values.len()).collect();
    k_subsets(&labels, degree)
        .into_iter()
        .map(|s| s.iter().fold(int(1), |acc, i| acc * values[i - 1].clone()))
        .fold(ExactScalar::zero(), |acc, t| acc + t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The one-pass recurrence agrees with direct tuple enumeration, and
    /// appending a value maps e_d to e_d + v * e_{d-1}.
    #[test]
    fn esym_recurrence_matches_enumeration(
        nums in prop::collection::vec(1i64..50, 0..8),
        degree in 0usize..9,
    ) {
        let values: Vec<ExactScalar> = nums.iter().map(|&n| rat(n, 7)).collect();
        let fast = elementary_symmetric(&values, degree);
        prop_assert_eq!(fast.clone(), esym_by_enumeration(&values, degree));
        let mut extended = values.clone();
        extended.push(rat(3, 2));
        if degree >= 1 {
            let expect = elementary_symmetric(&values, degree)
                + rat(3, 2) * elementary_symmetric(&values, degree - 1);
            prop_assert_eq!(elementary_symmetric(&extended, degree), expect);
        }
    }

    /// Every coset member sends the tail block onto K; distinct K of equal
    /// size give disjoint cosets of size (c-k)!.
    #[test]
    fn coset_contract(c in 3usize..7, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let k = 1 + (rng.next_u64() as usize) % (c - 1);
        let pool: Vec<usize> = (1..=c).collect();
        let subsets = k_subsets(&pool, k);
        let pick = (rng.next_u64() as usize) % subsets.len();
        let big_k = &subsets[pick];
        let perms = coset(big_k, c, k).unwrap();
        let expected: usize = (1..=c - k).product::<usize>().max(1);
        prop_assert_eq!(perms.len(), expected);
        for pi in &perms {
            for z in c - k + 1..=c {
                prop_assert!(big_k.contains(pi.apply(z)));
            }
        }
    }

    /// The extended binomial coefficient vanishes exactly on the
    /// non-contributing subscripts.
    #[test]
    fn extended_binomial_zero_iff_non_contributing(
        entries in prop::collection::vec(1usize..7, 1..6),
    ) {
        let c = 6;
        let h = CusumSubscript::new(entries.clone(), c).unwrap();
        let value = extended_binomial(&entries, entries.len());
        prop_assert_eq!(value.is_zero(), !h.is_contributing());
        if h.is_contributing() {
            prop_assert!(value > ExactScalar::zero());
        }
    }

    /// Any valid strict configuration weakly submajorizes its extreme form.
    #[test]
    fn drawn_configurations_submajorize_star(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let c = 3 + (rng.next_u64() as usize) % 4;
        let b = 1 + (rng.next_u64() as usize) % (c - 2).max(1);
        let b = b.min(c - 2);
        let k = 1 + (rng.next_u64() as usize) % (c - b - 1).max(1);
        let k = k.min(c - b - 1);
        let a = draw_configuration(&mut rng, c, b, k).unwrap();
        let star = Configuration::a_star(c, b, a.r().clone()).unwrap();
        prop_assert!(submajorizes(&a, &star).unwrap());
        prop_assert!(!a.is_star());
    }

    /// Odds draws are ordered, bounded, and reproducible; sample 0 is the
    /// all-equal vector.
    #[test]
    fn odds_draws_are_valid(seed in any::<u64>(), sample in 0usize..5) {
        let mut rng = SplitMix64::derive(seed, &[sample as u64]);
        let w = draw_odds(&mut rng, 6, sample);
        prop_assert!(w.entries().windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(*w.entries().last().unwrap() >= int(1));
        prop_assert!(*w.entries().first().unwrap() <= int(5));
        if sample == 0 {
            prop_assert_eq!(w.lambda(), 0);
        }
        let mut rng2 = SplitMix64::derive(seed, &[sample as u64]);
        let w2 = draw_odds(&mut rng2, 6, sample);
        prop_assert_eq!(w.entries(), w2.entries());
    }

    /// Rational strings round-trip through the canonical format.
    #[test]
    fn rational_strings_round_trip(n in -1000i64..1000, d in 1i64..500) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    /// Records survive the JSONL encoding, and sorting is order-insensitive.
    #[test]
    fn records_round_trip_and_sort_canonically(
        seeds in prop::collection::vec(any::<u64>(), 1..6),
    ) {
        let mut records: Vec<VerificationRecord> = seeds
            .iter()
            .map(|&s| {
                let scn = cusumlab::muirhead::Scenario::representative(4, 2, 1, 2, 1).unwrap();
                let h = CusumSubscript::new(vec![1 + (s % 4) as usize, 3], 4).unwrap();
                VerificationRecord {
                    schema_version: "1".into(),
                    command: "sweep".into(),
                    scenario: ScenarioMeta::new(&scn, &h),
                    w: None,
                    quantity: "cusum_at_aplus".into(),
                    value: format_rational(&rat(s as i64 % 97, 13)),
                    verdict: Verdict::Pass,
                    seed: s,
                    elapsed_ms: 0,
                }
            })
            .collect();
        let mut reversed: Vec<VerificationRecord> = records.iter().rev().cloned().collect();
        sort_records(&mut records);
        sort_records(&mut reversed);
        prop_assert_eq!(to_jsonl(&records), to_jsonl(&reversed));
        let parsed = from_jsonl(&to_jsonl(&records)).unwrap();
        prop_assert_eq!(parsed, records);
    }

    /// The sequential-model pmf is a probability distribution with support
    /// inside the admissible q range.
    #[test]
    fn qp_pmf_is_a_distribution(
        entries in prop::collection::vec(1usize..7, 1..5),
        b in 1usize..6,
    ) {
        let c = 6;
        let h = CusumSubscript::new(entries, c).unwrap();
        prop_assume!(h.is_contributing());
        let p = h.p();
        let d = cusumlab::lemmas::qp_distribution(&h, b, c, p).unwrap();
        let total: ExactScalar = d.pmf.values().fold(ExactScalar::zero(), |a, v| a + v.clone());
        prop_assert_eq!(total, int(1));
        let lo = p.saturating_sub(c - b);
        let hi = b.min(p);
        for (&q, pr) in &d.pmf {
            prop_assert!(pr > &ExactScalar::zero());
            prop_assert!(q >= lo && q <= hi);
        }
    }

    /// Binomials out of range vanish; in range they match the factorial
    /// definition.
    #[test]
    fn binomial_matches_factorials(n in 0usize..20, r in -3i64..23) {
        let value = binomial(n, r);
        if r < 0 || r as usize > n {
            prop_assert!(value.is_zero());
        } else {
            let fact = |m: usize| cusumlab::combinatorics::factorial(m);
            let expect = ExactScalar::new(fact(n), fact(r as usize) * fact(n - r as usize));
            prop_assert_eq!(value, expect);
        }
    }
}

/// Non-proptest sanity: odds vectors accept equality runs and reject
/// violations of ordering or the >= 1 floor.
#[test]
fn odds_vector_validation() {
    assert!(OddsVector::new(vec![int(2), int(2), int(1)]).is_ok());
    assert!(OddsVector::new(vec![int(1), int(2)]).is_err());
    assert!(OddsVector::new(vec![int(2), rat(1, 2)]).is_err());
    assert!(IndexSet::new(vec![3, 3]).is_err());
}
