//! Equal-odds averages, the sequential-uniform probability model with its
//! stochastic-dominance checks, single-index sign patterns, average-ratio
//! bounds, and the plus/minus decomposition of the unconstrained average.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::aplus::{rhs_constant, AplusInstance};
use crate::combinatorics::{binomial, factorial, IndexSet};
use crate::error::Error;
use crate::muirhead::{CusumSubscript, OddsVector};
use crate::scalar::{ExactScalar, Scalar};
use crate::Result;

/// Exact average of `k_J = C(c-b-p+q'[j], k)` over all distinct-element
/// subscripts `[j] <= [h]`. For contributing `h` with entries at most
/// `c - 1` this strictly exceeds `rhs_constant(c, b, k, p)`; at the
/// unconstrained subscript it equals it exactly.
pub fn lemma41_average(c: usize, b: usize, k: usize, p: usize, h: &CusumSubscript) -> Result<ExactScalar> {
    if h.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: h.p() });
    }
    if !h.is_contributing() {
        return Err(Error::NonContributing);
    }
    let bounds = h.entries();
    let mut total = ExactScalar::zero();
    let mut count = 0u64;
    // Walk distinct tuples, tracking only how many chosen values are <= b.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        bounds: &[usize],
        alpha: usize,
        used: u64,
        q_prime: usize,
        c: usize,
        b: usize,
        k: usize,
        p: usize,
        total: &mut ExactScalar,
        count: &mut u64,
    ) {
        if alpha == bounds.len() {
            *total += binomial(c + q_prime - b - p, k as i64);
            *count += 1;
            return;
        }
        for jv in 1..=bounds[alpha] {
            let bit = 1u64 << (jv - 1);
            if used & bit == 0 {
                rec(
                    bounds,
                    alpha + 1,
                    used | bit,
                    q_prime + usize::from(jv <= b),
                    c,
                    b,
                    k,
                    p,
                    total,
                    count,
                );
            }
        }
    }
    rec(bounds, 0, 0, 0, c, b, k, p, &mut total, &mut count);
    debug_assert_eq!(
        ExactScalar::from_integer(count.into()),
        ExactScalar::from_integer(factorial(p)) * h.extended_binomial()
    );
    Ok(total / ExactScalar::from_integer(count.into()))
}

/// Exact distribution of the number of draws at or below `b` under the
/// sequential uniform model: draw `J_1` uniformly from `{1..h'_1}`, then
/// each later `J_alpha` uniformly from `{1..h'_alpha}` minus the values
/// already drawn, with the thresholds taken in ascending order.
///
/// With ascending thresholds the model is uniform over all distinct-element
/// subscripts `[j] <= [h']`, so this is also the distribution of `q'[j]`
/// under the uniform average of `lemma41_average`.
#[derive(Debug, Clone)]
pub struct QpDistribution {
    pub c: usize,
    pub b: usize,
    pub p: usize,
    pub thresholds: Vec<usize>,
    pub pmf: BTreeMap<usize, ExactScalar>,
}

impl QpDistribution {
    pub fn pmf_at(&self, q: usize) -> ExactScalar {
        self.pmf.get(&q).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Tail probability `P[q > t]`.
    pub fn tail(&self, t: usize) -> ExactScalar {
        self.pmf
            .iter()
            .filter(|(q, _)| **q > t)
            .fold(ExactScalar::zero(), |acc, (_, pr)| acc + pr.clone())
    }

    /// Expectation of `C(c-b-p+q, k)` under the pmf; by construction this
    /// equals `lemma41_average` for the same subscript.
    pub fn expected_k_subsets(&self, k: usize) -> ExactScalar {
        self.pmf.iter().fold(ExactScalar::zero(), |acc, (q, pr)| {
            acc + pr.clone() * binomial(self.c + q - self.b - self.p, k as i64)
        })
    }
}

/// Dynamic program over the sequential model. The state is the count of
/// used values at or below `b`; conditional uniformity within threshold
/// classes makes that count sufficient.
pub fn qp_distribution(h: &CusumSubscript, b: usize, c: usize, p: usize) -> Result<QpDistribution> {
    if h.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: h.p() });
    }
    if h.entries().iter().any(|&v| v > c) {
        return Err(Error::OutOfRange(format!("subscript entry beyond c = {c}")));
    }
    if !h.is_contributing() {
        return Err(Error::NonContributing);
    }
    let thresholds = h.sorted_ascending();
    let mut states: BTreeMap<usize, ExactScalar> = BTreeMap::new();
    states.insert(0, ExactScalar::from_integer(1.into()));
    for (alpha, &tau) in thresholds.iter().enumerate() {
        let avail = tau - alpha; // all used values sit below tau
        debug_assert!(avail >= 1);
        let mut next: BTreeMap<usize, ExactScalar> = BTreeMap::new();
        for (&t, pr) in &states {
            // Used values are all below tau, so the count at or below b is
            // t itself (and equals alpha whenever tau <= b).
            let le_avail = tau.min(b) - t;
            let gt_avail = avail - le_avail;
            if le_avail > 0 {
                let prob = pr.clone() * ExactScalar::new(le_avail.into(), avail.into());
                next.entry(t + 1)
                    .and_modify(|v| *v += prob.clone())
                    .or_insert(prob);
            }
            if gt_avail > 0 {
                let prob = pr.clone() * ExactScalar::new(gt_avail.into(), avail.into());
                next.entry(t)
                    .and_modify(|v| *v += prob.clone())
                    .or_insert(prob);
            }
        }
        states = next;
    }
    let total: ExactScalar = states.values().fold(ExactScalar::zero(), |a, v| a + v.clone());
    debug_assert_eq!(total, ExactScalar::from_integer(1.into()));
    Ok(QpDistribution {
        c,
        b,
        p,
        thresholds,
        pmf: states,
    })
}

/// Outcome of a stochastic-dominance comparison against the unconstrained
/// model `h' = (c, ..., c)`.
#[derive(Debug, Clone)]
pub struct DominanceCheck {
    pub holds: bool,
    pub strict_somewhere: bool,
    /// True when every tail probability coincides; reported, never silently
    /// passed as strict dominance.
    pub all_equal: bool,
}

/// Verifies `P_[h][q_p > t] >= P_[h'][q_p > t]` for every `t`, with strict
/// inequality somewhere, where `h' = (c, ..., c)`.
pub fn check_stochastic_dominance(
    h: &CusumSubscript,
    b: usize,
    c: usize,
    p: usize,
) -> Result<DominanceCheck> {
    let constrained = qp_distribution(h, b, c, p)?;
    let unconstrained_h = CusumSubscript::new(vec![c; p], c)?;
    let unconstrained = qp_distribution(&unconstrained_h, b, c, p)?;
    let mut holds = true;
    let mut strict = false;
    for t in 0..=b.min(p) {
        let lhs = constrained.tail(t);
        let rhs = unconstrained.tail(t);
        if lhs < rhs {
            holds = false;
        }
        if lhs > rhs {
            strict = true;
        }
    }
    Ok(DominanceCheck {
        holds,
        strict_somewhere: strict,
        all_equal: holds && !strict,
    })
}

/// Values and sign verdict for the single-index components at `a+`.
#[derive(Debug, Clone)]
pub struct SignPattern {
    pub values: Vec<ExactScalar>,
    /// Strictly positive for `j <= b`, strictly negative for `j > b`.
    pub holds: bool,
}

/// Single-index (`p = 1`) component values `F_[j](a+)` for `j = 1..c`.
pub fn single_index_signs(
    c: usize,
    b: usize,
    k: usize,
    q: usize,
    w: &OddsVector<ExactScalar>,
) -> Result<SignPattern> {
    let mut inst = AplusInstance::new(c, b, k, 1, q, w.clone())?;
    let mut values = Vec::with_capacity(c);
    for j in 1..=c {
        values.push(inst.component_at_aplus(&CusumSubscript::new(vec![j], c)?)?);
    }
    let holds = values
        .iter()
        .enumerate()
        .all(|(idx, v)| if idx < b { v.is_positive_value() } else { (-v.clone()).is_positive_value() });
    Ok(SignPattern { values, holds })
}

/// Which side of the single-index bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    /// `j <= b`, `q = 0`: ratio bounded below by `1 - k/c`.
    Lower,
    /// `j > b`, `q = 1`: ratio bounded above by `(1 - k/c)/(1 - k/(c-b))`.
    Upper,
}

/// Outcome of one average-ratio bound check.
#[derive(Debug, Clone)]
pub struct Lemma43Check {
    pub side: BoundSide,
    pub ratio: ExactScalar,
    pub bound: ExactScalar,
    pub holds: bool,
}

/// Checks the stated bound on the average cross-product ratio for `p = 1`,
/// pairing `q = 0` with `j <= b` and `q = 1` with `j > b`. The bounds are
/// tested non-strictly.
pub fn check_lemma43_bounds(
    c: usize,
    b: usize,
    k: usize,
    j: usize,
    w: &OddsVector<ExactScalar>,
) -> Result<Lemma43Check> {
    if j == 0 || j > c {
        return Err(Error::OutOfRange(format!("j = {j} with c = {c}")));
    }
    let side = if j <= b { BoundSide::Lower } else { BoundSide::Upper };
    let q = match side {
        BoundSide::Lower => 0,
        BoundSide::Upper => 1,
    };
    let mut inst = AplusInstance::new(c, b, k, 1, q, w.clone())?;
    let j_set = IndexSet::new(vec![j])?;
    let ratio = inst.avg_cross_product_ratio(&j_set)?;
    let one_minus_kc =
        ExactScalar::from_integer(1.into()) - ExactScalar::new(k.into(), c.into());
    let (bound, holds) = match side {
        BoundSide::Lower => (one_minus_kc.clone(), ratio >= one_minus_kc),
        BoundSide::Upper => {
            let denom = ExactScalar::from_integer(1.into())
                - ExactScalar::new(k.into(), (c - b).into());
            let bound = one_minus_kc / denom;
            (bound.clone(), ratio <= bound)
        }
    };
    Ok(Lemma43Check { side, ratio, bound, holds })
}

/// The plus/minus split of the unconstrained weighted average for `p = 1`.
#[derive(Debug, Clone)]
pub struct AverageDecomposition {
    pub overall: ExactScalar,
    pub avg_plus: ExactScalar,
    pub avg_minus: Option<ExactScalar>,
    pub weight_plus: ExactScalar,
    pub weight_minus: ExactScalar,
    pub rhs: ExactScalar,
    pub identity_holds: bool,
}

/// Splits the unconstrained average of `k_j R_j.` into the part covered by
/// `j <= h` and the rest; their weighted combination reproduces the
/// right-hand constant exactly.
pub fn average_decomposition(
    c: usize,
    b: usize,
    k: usize,
    q: usize,
    h: usize,
    w: &OddsVector<ExactScalar>,
) -> Result<AverageDecomposition> {
    if h == 0 || h > c {
        return Err(Error::OutOfRange(format!("h = {h} with c = {c}")));
    }
    let mut inst = AplusInstance::new(c, b, k, 1, q, w.clone())?;
    let mut weights = Vec::with_capacity(c);
    let mut terms = Vec::with_capacity(c);
    for j in 1..=c {
        let j_set = IndexSet::new(vec![j])?;
        let wbar = if q == 1 { w.get(j).clone() } else { ExactScalar::from_integer(1.into()) };
        let u_j = inst.u_j(&j_set);
        weights.push(wbar * u_j);
        terms.push(inst.cross_product_sum(&j_set)?);
    }
    let total_weight: ExactScalar = weights.iter().fold(ExactScalar::zero(), |a, v| a + v.clone());
    let weighted_sum = |range: std::ops::Range<usize>| -> (ExactScalar, ExactScalar) {
        let mut wsum = ExactScalar::zero();
        let mut tsum = ExactScalar::zero();
        for idx in range {
            wsum += weights[idx].clone();
            tsum += weights[idx].clone() * terms[idx].clone();
        }
        (wsum, tsum)
    };
    let (plus_w, plus_t) = weighted_sum(0..h);
    let (minus_w, minus_t) = weighted_sum(h..c);
    let overall = (plus_t.clone() + minus_t.clone()) / total_weight.clone();
    let avg_plus = plus_t / plus_w.clone();
    let avg_minus = if minus_w.is_zero() {
        None
    } else {
        Some(minus_t / minus_w.clone())
    };
    let weight_plus = plus_w / total_weight.clone();
    let weight_minus = minus_w / total_weight;
    let rhs = rhs_constant(c, b, k, 1);
    let recombined = weight_plus.clone() * avg_plus.clone()
        + avg_minus
            .clone()
            .map(|am| weight_minus.clone() * am)
            .unwrap_or_else(ExactScalar::zero);
    let identity_holds = recombined == rhs && overall == rhs;
    Ok(AverageDecomposition {
        overall,
        avg_plus,
        avg_minus,
        weight_plus,
        weight_minus,
        rhs,
        identity_holds,
    })
}

/// Bound checks for every `j = 1..c` at once, sharing the two instances
/// (`q = 0` below `b`, `q = 1` above).
pub fn lemma43_bounds_for_all_j(
    c: usize,
    b: usize,
    k: usize,
    w: &OddsVector<ExactScalar>,
) -> Result<Vec<Lemma43Check>> {
    let mut lower_inst = AplusInstance::new(c, b, k, 1, 0, w.clone())?;
    let mut upper_inst = AplusInstance::new(c, b, k, 1, 1, w.clone())?;
    let one_minus_kc =
        ExactScalar::from_integer(1.into()) - ExactScalar::new(k.into(), c.into());
    let upper_bound = one_minus_kc.clone()
        / (ExactScalar::from_integer(1.into()) - ExactScalar::new(k.into(), (c - b).into()));
    let mut out = Vec::with_capacity(c);
    for j in 1..=c {
        let j_set = IndexSet::new(vec![j])?;
        let (side, ratio, bound) = if j <= b {
            (BoundSide::Lower, lower_inst.avg_cross_product_ratio(&j_set)?, one_minus_kc.clone())
        } else {
            (BoundSide::Upper, upper_inst.avg_cross_product_ratio(&j_set)?, upper_bound.clone())
        };
        let holds = match side {
            BoundSide::Lower => ratio >= bound,
            BoundSide::Upper => ratio <= bound,
        };
        out.push(Lemma43Check { side, ratio, bound, holds });
    }
    Ok(out)
}

/// The decomposition for every cut point `h = 1..c` at once, computing the
/// per-index weights and ratio sums a single time.
pub fn decompositions_for_all_h(
    c: usize,
    b: usize,
    k: usize,
    q: usize,
    w: &OddsVector<ExactScalar>,
) -> Result<Vec<AverageDecomposition>> {
    let mut inst = AplusInstance::new(c, b, k, 1, q, w.clone())?;
    let mut weights = Vec::with_capacity(c);
    let mut terms = Vec::with_capacity(c);
    for j in 1..=c {
        let j_set = IndexSet::new(vec![j])?;
        let wbar = if q == 1 { w.get(j).clone() } else { ExactScalar::from_integer(1.into()) };
        let u_j = inst.u_j(&j_set);
        weights.push(wbar * u_j);
        terms.push(inst.cross_product_sum(&j_set)?);
    }
    let total_weight: ExactScalar = weights.iter().fold(ExactScalar::zero(), |a, v| a + v.clone());
    let total_term: ExactScalar = weights
        .iter()
        .zip(&terms)
        .fold(ExactScalar::zero(), |a, (w, t)| a + w.clone() * t.clone());
    let rhs = rhs_constant(c, b, k, 1);
    let mut out = Vec::with_capacity(c);
    let mut plus_w = ExactScalar::zero();
    let mut plus_t = ExactScalar::zero();
    for h in 1..=c {
        plus_w += weights[h - 1].clone();
        plus_t += weights[h - 1].clone() * terms[h - 1].clone();
        let minus_w = total_weight.clone() - plus_w.clone();
        let minus_t = total_term.clone() - plus_t.clone();
        let avg_plus = plus_t.clone() / plus_w.clone();
        let avg_minus = if minus_w.is_zero() { None } else { Some(minus_t / minus_w.clone()) };
        let weight_plus = plus_w.clone() / total_weight.clone();
        let weight_minus = minus_w / total_weight.clone();
        let overall = total_term.clone() / total_weight.clone();
        let recombined = weight_plus.clone() * avg_plus.clone()
            + avg_minus
                .clone()
                .map(|am| weight_minus.clone() * am)
                .unwrap_or_else(ExactScalar::zero);
        let identity_holds = recombined == rhs && overall == rhs;
        out.push(AverageDecomposition {
            overall,
            avg_plus,
            avg_minus,
            weight_plus,
            weight_minus,
            rhs: rhs.clone(),
            identity_holds,
        });
    }
    Ok(out)
}
