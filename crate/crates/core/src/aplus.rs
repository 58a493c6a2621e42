//! Fast exact evaluation at the limit configuration `a+`.
//!
//! Components and cusums are computed from the tuplet re-expressions in
//! which every sum over tuples collapses to an elementary symmetric
//! polynomial of the odds values. This is what makes large instances
//! (c = 48 and beyond) tractable where direct permutation enumeration is
//! hopeless. All quantities here take `r = 1` without loss of generality;
//! a non-unit `r` is absorbed by replacing `w` with `w^r` pointwise.

use std::collections::HashMap;

use num_traits::Zero;

use crate::combinatorics::{binomial, elementary_symmetric, factorial, k_subsets, IndexSet};
use crate::error::Error;
use crate::muirhead::{CusumSubscript, OddsVector, Scenario};
use crate::scalar::{ExactScalar, Scalar};
use crate::Result;

/// One `a+` verification instance: the scenario constants plus the odds.
///
/// The superscript enters only through `q`, the number of its elements at
/// or below `b`; the evaluator carries a per-subset cache of bracket values
/// so that sweeping many subscripts of one instance stays cheap.
#[derive(Debug, Clone)]
pub struct AplusInstance<S: Scalar> {
    pub c: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    w: OddsVector<S>,
    bracket_cache: HashMap<u64, S>,
    cross_sum_cache: HashMap<u64, S>,
    u_cache: HashMap<u64, S>,
}

impl<S: Scalar> AplusInstance<S> {
    pub fn new(c: usize, b: usize, k: usize, p: usize, q: usize, w: OddsVector<S>) -> Result<Self> {
        // Range validation is shared with Scenario.
        Scenario::representative(c, b, k, p, q)?;
        if w.len() != c {
            return Err(Error::DimensionMismatch { expected: c, found: w.len() });
        }
        Ok(AplusInstance {
            c,
            b,
            k,
            p,
            q,
            w,
            bracket_cache: HashMap::new(),
            cross_sum_cache: HashMap::new(),
            u_cache: HashMap::new(),
        })
    }

    pub fn from_scenario(scn: &Scenario, w: OddsVector<S>) -> Result<Self> {
        AplusInstance::new(scn.c, scn.b, scn.k, scn.p, scn.q, w)
    }

    pub fn odds(&self) -> &OddsVector<S> {
        &self.w
    }

    /// The positive multiplicity prefactor
    /// `p! C(b, q) C(c-b-k, p-q) / C(p, q)` relating the bracket to the
    /// component value.
    fn prefactor(&self) -> ExactScalar {
        let fac: ExactScalar = ExactScalar::from_integer(factorial(self.p));
        fac * binomial(self.b, self.q as i64) * binomial(self.c - self.b - self.k, (self.p - self.q) as i64)
            / binomial(self.p, self.q as i64)
    }

    fn mask_of(entries: &[usize]) -> u64 {
        entries.iter().fold(0u64, |m, &x| m | (1u64 << (x - 1)))
    }

    fn esym_excluding(&self, degree: usize, excluded_mask: u64) -> S {
        let vals = self.w.values_excluding(|m| excluded_mask & (1u64 << (m - 1)) != 0);
        elementary_symmetric(&vals, degree)
    }

    /// The bracketed tuplet expression for a subscript with element set `J`:
    /// the sum over admissible `K` of normalized restricted ratios minus the
    /// full-group term scaled by `C(c-b-p+q, k)`.
    fn bracket(&mut self, j_mask: u64, j_elems: &[usize]) -> Result<S> {
        if let Some(v) = self.bracket_cache.get(&j_mask) {
            return Ok(v.clone());
        }
        let (c, b, k, p, q) = (self.c, self.b, self.k, self.p, self.q);
        let pool: Vec<usize> = (b + 1..=c).filter(|m| !j_elems.contains(m)).collect();
        let mut acc = S::zero();
        for big_k in k_subsets(&pool, k) {
            let k_mask = Self::mask_of(big_k.elements());
            let num = self.esym_excluding(b - q, j_mask | k_mask);
            let den = self.esym_excluding(b, k_mask);
            acc = acc + num / den;
        }
        let right_num = self.esym_excluding(b - q, j_mask);
        let right_den = self.esym_excluding(b, 0);
        let scale = S::from_rational(&binomial(c + q - b - p, k as i64));
        let bracket = acc - scale * right_num / right_den;
        self.bracket_cache.insert(j_mask, bracket.clone());
        Ok(bracket)
    }

    fn check_subscript(&self, j: &CusumSubscript) -> Result<()> {
        if j.p() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, found: j.p() });
        }
        if j.entries().iter().any(|&v| v > self.c) {
            return Err(Error::OutOfRange(format!("subscript entry beyond c = {}", self.c)));
        }
        Ok(())
    }

    /// `F_[j]^[i](a+)` via the tuplet re-expression; exactly zero on
    /// repeated subscript entries.
    pub fn component_at_aplus(&mut self, j: &CusumSubscript) -> Result<S> {
        self.check_subscript(j)?;
        let mut sorted = j.sorted_ascending();
        sorted.dedup();
        if sorted.len() != self.p {
            return Ok(S::zero());
        }
        let j_mask = Self::mask_of(j.entries());
        let mut w_qj = S::one();
        for &jv in j.entries().iter().take(self.q) {
            w_qj = w_qj * self.w.get(jv).clone();
        }
        let bracket = self.bracket(j_mask, &sorted)?;
        let d = S::from_rational(&self.prefactor());
        Ok(w_qj * bracket / d)
    }

    /// `S_[h]^[i](a+)`: the sum of components over all distinct-element
    /// subscripts `[j] <= [h]`.
    pub fn cusum_at_aplus(&mut self, h: &CusumSubscript) -> Result<S> {
        self.check_subscript(h)?;
        let mut total = S::zero();
        let mut tuple = vec![0usize; self.p];
        let bounds = h.entries().to_vec();
        let q = self.q;
        // Recursive walk over distinct tuples below the box bounds.
        #[allow(clippy::too_many_arguments)]
        fn rec<S: Scalar>(
            inst: &mut AplusInstance<S>,
            bounds: &[usize],
            alpha: usize,
            used: u64,
            w_partial: S,
            tuple: &mut Vec<usize>,
            q: usize,
            total: &mut S,
        ) -> Result<()> {
            if alpha == bounds.len() {
                let mask = used;
                let elems: Vec<usize> = tuple.clone();
                let bracket = inst.bracket(mask, &elems)?;
                *total = total.clone() + w_partial * bracket;
                return Ok(());
            }
            for jv in 1..=bounds[alpha] {
                let bit = 1u64 << (jv - 1);
                if used & bit != 0 {
                    continue;
                }
                tuple[alpha] = jv;
                let w_next = if alpha < q {
                    w_partial.clone() * inst.w.get(jv).clone()
                } else {
                    w_partial.clone()
                };
                rec(inst, bounds, alpha + 1, used | bit, w_next, tuple, q, total)?;
            }
            Ok(())
        }
        rec(self, &bounds, 0, 0, S::one(), &mut tuple, q, &mut total)?;
        let d = S::from_rational(&self.prefactor());
        Ok(total / d)
    }

    /// The four-factor cross-product ratio `R_JK` of averaged tuplet sums.
    pub fn cross_product_ratio(&self, j_set: &IndexSet, k_set: &IndexSet) -> Result<S> {
        let (c, b, k, p, q) = (self.c, self.b, self.k, self.p, self.q);
        if j_set.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: j_set.len() });
        }
        if k_set.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: k_set.len() });
        }
        if k_set.iter().any(|m| m <= b || m > c) {
            return Err(Error::OutOfRange("K must be contained in C \\ B".into()));
        }
        if !j_set.is_disjoint(k_set) {
            return Err(Error::OverlappingSets);
        }
        let jm = j_set.bitmask();
        let km = k_set.bitmask();
        let num1 = self.esym_excluding(b - q, jm | km);
        let num2 = self.esym_excluding(b, 0);
        let den1 = self.esym_excluding(b - q, jm);
        let den2 = self.esym_excluding(b, km);
        let n1 = S::from_rational(&binomial(c - k - p, (b - q) as i64));
        let n4 = S::from_rational(&binomial(c, b as i64));
        let n3 = S::from_rational(&binomial(c - p, (b - q) as i64));
        let n2 = S::from_rational(&binomial(c - k, b as i64));
        Ok((num1 / n1) * (num2 / n4) / ((den1 / n3) * (den2 / n2)))
    }

    /// `k_J` for a subscript element set: the number of admissible `K`.
    pub fn k_j(&self, j_set: &IndexSet) -> ExactScalar {
        let q_prime = j_set.iter().filter(|&m| m <= self.b).count();
        binomial(self.c + q_prime - self.b - self.p, self.k as i64)
    }

    /// The plain sum `k_J * R_J.` over all admissible `K` (zero when there
    /// are none), memoized per subset.
    pub fn cross_product_sum(&mut self, j_set: &IndexSet) -> Result<S> {
        let mask = j_set.bitmask();
        if let Some(v) = self.cross_sum_cache.get(&mask) {
            return Ok(v.clone());
        }
        let pool: Vec<usize> = (self.b + 1..=self.c).filter(|m| !j_set.contains(*m)).collect();
        let mut acc = S::zero();
        for big_k in k_subsets(&pool, self.k) {
            acc = acc + self.cross_product_ratio(j_set, &big_k)?;
        }
        self.cross_sum_cache.insert(mask, acc.clone());
        Ok(acc)
    }

    /// Mean of `R_JK` over all admissible `K`; errors when `k_J = 0` (the
    /// caller must treat the product `k_J * R_J.` as zero instead).
    pub fn avg_cross_product_ratio(&mut self, j_set: &IndexSet) -> Result<S> {
        let count = self.k_j(j_set);
        if count.is_zero() {
            return Err(Error::NoAdmissibleSubsets);
        }
        let total = self.cross_product_sum(j_set)?;
        Ok(total / S::from_rational(&count))
    }

    /// `u_J = sum of (b-q)-tuplet products over C \ J`, memoized.
    pub fn u_j(&mut self, j_set: &IndexSet) -> S {
        let mask = j_set.bitmask();
        if let Some(v) = self.u_cache.get(&mask) {
            return v.clone();
        }
        let v = self.esym_excluding(self.b - self.q, mask);
        self.u_cache.insert(mask, v.clone());
        v
    }

    /// Everything the weighted-average criterion needs to know about one
    /// subscript element set under a given cusum bound.
    pub fn subset_profile(&mut self, j_set: &IndexSet, h: &CusumSubscript) -> Result<SubsetProfile<S>> {
        if j_set.len() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, found: j_set.len() });
        }
        let q_prime = j_set.iter().filter(|&m| m <= self.b).count();
        let k_j = self.k_j(j_set);
        let u_j = self.u_j(j_set);
        let (f_j, w_sum) = self.ordering_weight_sum(j_set, h);
        let wbar = if f_j == 0 {
            S::zero()
        } else {
            w_sum / S::from_usize(f_j)
        };
        Ok(SubsetProfile {
            j_set: j_set.clone(),
            q_prime,
            k_j,
            u_j,
            f_j,
            wbar,
        })
    }

    /// Counts orderings `[j]` of the set with `j_alpha <= h_alpha`, and sums
    /// their leading `q`-products of odds.
    fn ordering_weight_sum(&self, j_set: &IndexSet, h: &CusumSubscript) -> (usize, S) {
        let elems: Vec<usize> = j_set.iter().collect();
        let bounds = h.entries();
        let mut count = 0usize;
        let mut w_sum = S::zero();
        let mut used = vec![false; elems.len()];
        #[allow(clippy::too_many_arguments)]
        fn rec<S: Scalar>(
            w: &OddsVector<S>,
            elems: &[usize],
            bounds: &[usize],
            q: usize,
            alpha: usize,
            used: &mut Vec<bool>,
            w_partial: S,
            count: &mut usize,
            w_sum: &mut S,
        ) {
            if alpha == elems.len() {
                *count += 1;
                *w_sum = w_sum.clone() + w_partial;
                return;
            }
            for t in 0..elems.len() {
                if used[t] || elems[t] > bounds[alpha] {
                    continue;
                }
                used[t] = true;
                let w_next = if alpha < q {
                    w_partial.clone() * w.get(elems[t]).clone()
                } else {
                    w_partial.clone()
                };
                rec(w, elems, bounds, q, alpha + 1, used, w_next, count, w_sum);
                used[t] = false;
            }
        }
        rec(
            &self.w,
            &elems,
            bounds,
            self.q,
            0,
            &mut used,
            S::one(),
            &mut count,
            &mut w_sum,
        );
        (count, w_sum)
    }

    /// The weighted-average positivity criterion: the cusum at `a+` is
    /// positive exactly when the `f_J w-bar u_J`-weighted average of
    /// `k_J * R_J.` exceeds `C(c-b,k) C(c-k,p) / C(c,p)`.
    ///
    /// This route is computed from the cross-product ratios, independently
    /// of the bracket expansion behind [`Self::cusum_at_aplus`], so the sign
    /// equivalence is a genuine cross-check of both.
    pub fn check_weighted_average_criterion(&mut self, h: &CusumSubscript) -> Result<WeightedAverageCheck<S>> {
        self.check_subscript(h)?;
        if !h.is_contributing() {
            return Err(Error::NonContributing);
        }
        let labels: Vec<usize> = (1..=self.c).collect();
        let mut num = S::zero();
        let mut den = S::zero();
        for j_set in k_subsets(&labels, self.p) {
            let (f_j, w_sum) = self.ordering_weight_sum(&j_set, h);
            if f_j == 0 {
                continue;
            }
            let u_j = self.u_j(&j_set);
            let t_j = self.cross_product_sum(&j_set)?;
            num = num + w_sum.clone() * u_j.clone() * t_j;
            den = den + w_sum * u_j;
        }
        let lhs = num / den;
        let rhs = S::from_rational(&rhs_constant(self.c, self.b, self.k, self.p));
        let predicts_positive = lhs > rhs;
        let is_equality = lhs == rhs;
        Ok(WeightedAverageCheck { lhs, rhs, predicts_positive, is_equality })
    }
}

/// Per-subset data entering the weighted-average criterion.
#[derive(Debug, Clone)]
pub struct SubsetProfile<S: Scalar> {
    pub j_set: IndexSet,
    pub q_prime: usize,
    pub k_j: ExactScalar,
    pub u_j: S,
    pub f_j: usize,
    pub wbar: S,
}

/// Outcome of the weighted-average comparison.
#[derive(Debug, Clone)]
pub struct WeightedAverageCheck<S: Scalar> {
    pub lhs: S,
    pub rhs: S,
    pub predicts_positive: bool,
    pub is_equality: bool,
}

/// The right-hand constant `C(c-b,k) C(c-k,p) / C(c,p)`, equal to
/// `C(c-k,b) C(c-p,k) / C(c,b)`.
pub fn rhs_constant(c: usize, b: usize, k: usize, p: usize) -> ExactScalar {
    binomial(c - b, k as i64) * binomial(c - k, p as i64) / binomial(c, p as i64)
}

/// The alternative closed form of the same constant, kept separate so the
/// algebraic identity can be asserted.
pub fn rhs_constant_alt(c: usize, b: usize, k: usize, p: usize) -> ExactScalar {
    binomial(c - k, b as i64) * binomial(c - p, k as i64) / binomial(c, b as i64)
}

/// Number of orderings `[j]` of the elements of `J` with `j_alpha <= h_alpha`.
pub fn orderings_count(j_set: &IndexSet, h: &CusumSubscript) -> usize {
    assert_eq!(j_set.len(), h.p(), "|J| must equal |h|");
    let elems: Vec<usize> = j_set.iter().collect();
    let bounds = h.entries();
    let mut used = vec![false; elems.len()];
    fn rec(elems: &[usize], bounds: &[usize], alpha: usize, used: &mut Vec<bool>) -> usize {
        if alpha == elems.len() {
            return 1;
        }
        let mut n = 0;
        for t in 0..elems.len() {
            if !used[t] && elems[t] <= bounds[alpha] {
                used[t] = true;
                n += rec(elems, bounds, alpha + 1, used);
                used[t] = false;
            }
        }
        n
    }
    rec(&elems, bounds, 0, &mut used)
}

/// All contributing subscripts of length `p` with entries in `1..=max_entry`,
/// in lexicographic order.
pub fn contributing_subscripts(max_entry: usize, p: usize, c: usize) -> Vec<CusumSubscript> {
    let mut out = Vec::new();
    let mut tuple = vec![1usize; p];
    loop {
        let candidate = CusumSubscript::new(tuple.clone(), c).expect("entries within range");
        if candidate.is_contributing() {
            out.push(candidate);
        }
        // Odometer increment.
        let mut pos = p;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if tuple[pos] < max_entry {
                tuple[pos] += 1;
                for t in tuple.iter_mut().skip(pos + 1) {
                    *t = 1;
                }
                break;
            }
        }
    }
}

/// One sweep unit: a scenario together with every contributing subscript
/// whose entries stay at or below `c - 1`.
#[derive(Debug, Clone)]
pub struct ScenarioSweep {
    pub scenario: Scenario,
    pub subscripts: Vec<CusumSubscript>,
}

/// Enumerates all `(c, b, k, p, q)` in the admissible ranges for
/// `3 <= c <= c_max`, with the representative superscript and the full list
/// of contributing subscripts, in a deterministic order.
pub fn enumerate_scenarios(c_max: usize) -> Result<Vec<ScenarioSweep>> {
    if c_max < 3 {
        return Err(Error::OutOfRange("c_max must be at least 3".into()));
    }
    let mut out = Vec::new();
    for c in 3..=c_max {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                for p in 1..=c - k {
                    let q_lo = (b + k + p).saturating_sub(c);
                    let q_hi = b.min(p);
                    for q in q_lo..=q_hi {
                        let scenario = Scenario::representative(c, b, k, p, q)?;
                        let subscripts = contributing_subscripts(c - 1, p, c);
                        out.push(ScenarioSweep { scenario, subscripts });
                    }
                }
            }
        }
    }
    Ok(out)
}
