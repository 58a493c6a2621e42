//! Structural agreement between the direct-enumeration oracle and the
//! tuplet engine: marginalization, table consistency, superscript
//! independence, and sampled positivity at arbitrary configurations.

use cusumlab::aplus::{enumerate_scenarios, AplusInstance};
use cusumlab::combinatorics::k_subsets;
use cusumlab::muirhead::{
    eval_f, submajorizes, Configuration, CusumSubscript, CusumTable, MultiIndex, Scenario,
};
use cusumlab::rng::{draw_configuration, draw_odds, SplitMix64};
use cusumlab::scalar::{int, ExactScalar};
use num_traits::Zero;

fn seeded_odds(c: usize, seed: u64, sample: usize) -> cusumlab::muirhead::OddsVector<ExactScalar> {
    let mut rng = SplitMix64::derive(seed, &[c as u64, sample as u64]);
    draw_odds(&mut rng, c, sample)
}

/// Summing a component over one subscript slot reduces to the component of
/// the superscript with that element removed — exactly, at `a+` and at a
/// random strict configuration.
#[test]
fn marginalization_reduces_dimension() {
    for sweep in enumerate_scenarios(5).unwrap() {
        let scn = &sweep.scenario;
        if scn.p < 2 {
            continue;
        }
        let (c, b, k, p) = (scn.c, scn.b, scn.k, scn.p);
        let w = seeded_odds(c, 41, 1);
        let mut rng = SplitMix64::derive(43, &[c as u64, b as u64, k as u64]);
        let arbitrary = draw_configuration(&mut rng, c, b, k).unwrap();
        for a in [Configuration::a_plus(c, b, k, int(1)).unwrap(), arbitrary] {
            let table = CusumTable::build(&scn.superscript, &a, &w).unwrap();
            for alpha in 0..p {
                let reduced_positions: Vec<usize> = scn
                    .superscript
                    .positions()
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != alpha)
                    .map(|(_, &v)| v)
                    .collect();
                let reduced_i = MultiIndex::new(reduced_positions, c, k).unwrap();
                let reduced = CusumTable::build(&reduced_i, &a, &w).unwrap();
                // Check every reduced tuple of distinct labels.
                let labels: Vec<usize> = (1..=c).collect();
                for base in k_subsets(&labels, p - 1) {
                    let base: Vec<usize> = base.iter().collect();
                    let mut total = ExactScalar::zero();
                    for j_alpha in 1..=c {
                        let mut full = base.clone();
                        full.insert(alpha, j_alpha);
                        total += table.component(&full);
                    }
                    assert_eq!(total, reduced.component(&base), "scn {scn:?} alpha {alpha}");
                }
            }
        }
    }
}

/// The double-component table: row sums give the first single components,
/// column sums the second, and the grand total is `F(a)`.
#[test]
fn double_component_table_is_consistent() {
    for sweep in enumerate_scenarios(5).unwrap() {
        let scn = &sweep.scenario;
        if scn.p != 2 {
            continue;
        }
        let (c, b, k) = (scn.c, scn.b, scn.k);
        let w = seeded_odds(c, 57, 2);
        let mut rng = SplitMix64::derive(59, &[c as u64, b as u64, k as u64]);
        let a = draw_configuration(&mut rng, c, b, k).unwrap();
        let table = CusumTable::build(&scn.superscript, &a, &w).unwrap();
        let positions = scn.superscript.positions();
        let first = CusumTable::build(&MultiIndex::new(vec![positions[0]], c, k).unwrap(), &a, &w).unwrap();
        let second = CusumTable::build(&MultiIndex::new(vec![positions[1]], c, k).unwrap(), &a, &w).unwrap();
        let mut grand = ExactScalar::zero();
        for j1 in 1..=c {
            let mut row = ExactScalar::zero();
            for j2 in 1..=c {
                row += table.component(&[j1, j2]);
            }
            assert_eq!(row, first.component(&[j1]));
        }
        for j2 in 1..=c {
            let mut col = ExactScalar::zero();
            for j1 in 1..=c {
                col += table.component(&[j1, j2]);
            }
            assert_eq!(col, second.component(&[j2]));
            grand += col;
        }
        assert_eq!(grand, eval_f(&a, &w).unwrap(), "grand total, scn {scn:?}");
    }
}

/// At `a+` the cusum depends on the superscript only through `q`: two
/// distinct superscripts with equal `q` give identical values, and both
/// match the engine.
#[test]
fn superscript_independence_through_q() {
    for sweep in enumerate_scenarios(5).unwrap() {
        let scn = &sweep.scenario;
        let (c, b, k, p, q) = (scn.c, scn.b, scn.k, scn.p, scn.q);
        // Find a second superscript with the same q.
        let head: Vec<usize> = (1..=b).collect();
        let tail: Vec<usize> = (b + 1..=c - k).collect();
        let alternates: Vec<Vec<usize>> = k_subsets(&head, q)
            .into_iter()
            .flat_map(|hs| {
                k_subsets(&tail, p - q).into_iter().map(move |ts| {
                    let mut v: Vec<usize> = hs.iter().collect();
                    v.extend(ts.iter());
                    v
                })
            })
            .collect();
        let other = alternates
            .into_iter()
            .find(|cand| cand != scn.superscript.positions());
        let Some(other) = other else { continue };
        let other_i = MultiIndex::new(other, c, k).unwrap();
        let w = seeded_odds(c, 71, 3);
        let aplus = Configuration::a_plus(c, b, k, int(1)).unwrap();
        let table_a = CusumTable::build(&scn.superscript, &aplus, &w).unwrap();
        let table_b = CusumTable::build(&other_i, &aplus, &w).unwrap();
        let mut engine = AplusInstance::from_scenario(scn, w.clone()).unwrap();
        for h in sweep.subscripts.iter().take(40) {
            let va = table_a.cusum(h);
            let vb = table_b.cusum(h);
            assert_eq!(va, vb, "superscript dependence beyond q, scn {scn:?} h {h:?}");
            assert_eq!(va, engine.cusum_at_aplus(h).unwrap(), "engine mismatch");
        }
    }
}

/// Sampled positivity at arbitrary configurations (small scale): every
/// contributing full-superscript cusum is strictly positive for random
/// integer-exponent configurations and random odds.
#[test]
fn sampled_positivity_at_arbitrary_configurations() {
    for c in 3..=4usize {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                let p = c - k;
                let scn = {
                    let i = MultiIndex::new((1..=p).collect(), c, k).unwrap();
                    Scenario::with_superscript(c, b, k, i).unwrap()
                };
                for sample in 0..10usize {
                    let mut rng = SplitMix64::derive(83, &[c as u64, b as u64, k as u64, sample as u64]);
                    let a = draw_configuration(&mut rng, c, b, k).unwrap();
                    let w = draw_odds(&mut rng, c, sample);
                    let star = Configuration::a_star(c, b, a.r().clone()).unwrap();
                    assert!(submajorizes(&a, &star).unwrap());
                    assert!(!a.is_star());
                    let table = CusumTable::build(&scn.superscript, &a, &w).unwrap();
                    let equal_odds = w.lambda() == 0;
                    for h in cusumlab::aplus::contributing_subscripts(c, p, c) {
                        let v = table.cusum(&h);
                        let full_box = h.entries().iter().all(|&t| t == c);
                        if full_box && equal_odds {
                            // F(a) vanishes identically when all odds agree.
                            assert_eq!(v, ExactScalar::zero());
                        } else {
                            assert!(
                                v > ExactScalar::zero(),
                                "non-positive cusum at c={c} b={b} k={k} h={:?} sample {sample}: {v}",
                                h.entries()
                            );
                        }
                    }
                }
            }
        }
    }
}

/// The weighted-average criterion is a biconditional: its verdict matches
/// the exact sign of the cusum on every tested instance, through a route
/// built from cross-product ratios rather than the bracket expansion.
#[test]
fn weighted_average_criterion_sign_equivalence() {
    for sweep in enumerate_scenarios(4).unwrap() {
        let scn = &sweep.scenario;
        for sample in 0..3usize {
            let w = seeded_odds(scn.c, 113, sample);
            let mut engine = AplusInstance::from_scenario(scn, w).unwrap();
            for h in &sweep.subscripts {
                let cusum = engine.cusum_at_aplus(h).unwrap();
                let check = engine.check_weighted_average_criterion(h).unwrap();
                assert_eq!(
                    check.predicts_positive,
                    cusum > ExactScalar::zero(),
                    "criterion disagrees with sign at {scn:?} h {:?}",
                    h.entries()
                );
            }
            // The unconstrained subscript is the exact equality case.
            let full = CusumSubscript::new(vec![scn.c; scn.p], scn.c).unwrap();
            let check = engine.check_weighted_average_criterion(&full).unwrap();
            assert!(check.is_equality);
        }
    }
}

/// The engine handles subscript entries equal to `c` by marginalization;
/// the full box reproduces zero exactly for every scenario.
#[test]
fn engine_full_box_is_zero() {
    for sweep in enumerate_scenarios(4).unwrap() {
        let scn = &sweep.scenario;
        let w = seeded_odds(scn.c, 97, 1);
        let mut inst = AplusInstance::from_scenario(scn, w).unwrap();
        let full = CusumSubscript::new(vec![scn.c; scn.p], scn.c).unwrap();
        assert_eq!(inst.cusum_at_aplus(&full).unwrap(), ExactScalar::zero());
    }
}
