//! Symbolic positivity certificates for cusums at `a+`, exact numeric
//! fallback sweeps, and monotone path checks.
//!
//! The certificate clears the (positive) denominators of the tuplet
//! re-expression, changes variables so the ordered region `w_1 >= ... >=
//! w_c >= 1` becomes the nonnegative orthant, and checks coefficient
//! nonnegativity. That criterion is sufficient, not necessary: an
//! inconclusive certificate is never a refutation, and sweeps take over.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::aplus::AplusInstance;
use crate::combinatorics::{binomial_int, k_subsets};
use crate::error::Error;
use crate::muirhead::{eval_cusum, Configuration, CusumSubscript, MultiIndex, OddsVector, Scenario};
use crate::rng::{draw_odds, SplitMix64};
use crate::scalar::{int, rat, ExactScalar, Scalar};
use crate::Result;

/// Stored-monomial cap per polynomial; exceeding it downgrades the
/// certificate to a recorded "cap" status rather than failing a sweep.
pub const MONOMIAL_CAP: usize = 5_000_000;

/// Sparse multivariate polynomial with exact integer coefficients. The
/// term map is ordered, so serialization and iteration are canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: BigInt) -> Self {
        let mut p = SparsePolynomial::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    /// The monomial `coeff * prod x_i^{exps[i]}`.
    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = SparsePolynomial::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul_scalar(&self, scale: &BigInt) -> SparsePolynomial {
        if scale.is_zero() {
            return SparsePolynomial::zero(self.nvars);
        }
        SparsePolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * scale)).collect(),
        }
    }

    /// Product with a cap on the stored monomials of the result.
    pub fn mul(&self, other: &SparsePolynomial) -> Result<SparsePolynomial> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = SparsePolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exps, ca * cb);
            }
            if out.terms.len() > MONOMIAL_CAP {
                return Err(Error::ExpansionCap { monomials: out.terms.len(), cap: MONOMIAL_CAP });
            }
        }
        Ok(out)
    }

    /// Cheap product with the single variable `var`.
    fn mul_by_var(&self, var: usize) -> SparsePolynomial {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] += 1;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Elementary symmetric polynomial of degree `degree` in the listed
    /// variables (0-based), via the one-pass recurrence.
    pub fn esym(nvars: usize, vars: &[usize], degree: usize) -> SparsePolynomial {
        let mut e: Vec<SparsePolynomial> = (0..=degree)
            .map(|d| {
                if d == 0 {
                    SparsePolynomial::constant(nvars, BigInt::from(1))
                } else {
                    SparsePolynomial::zero(nvars)
                }
            })
            .collect();
        for &v in vars {
            for d in (1..=degree.min(vars.len())).rev() {
                let bumped = e[d - 1].mul_by_var(v);
                e[d] = e[d].add(&bumped);
            }
        }
        e.swap_remove(degree)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.nvars);
        let mut total = ExactScalar::zero();
        for (exps, coeff) in &self.terms {
            let mut term = ExactScalar::from_integer(coeff.clone());
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term *= point[v].pow(e as i32);
                }
            }
            total += term;
        }
        total
    }

    pub fn negative_coefficient_count(&self) -> usize {
        self.terms.values().filter(|c| c.is_negative()).count()
    }
}

/// Cleared-denominator numerator of the cusum re-expression: a polynomial
/// `P` in `w_1..w_c` with `sign(P(w)) = sign(S_[h](a+))` on the region
/// where all `w_j > 0`.
pub fn cusum_numerator_polynomial(scn: &Scenario, h: &CusumSubscript) -> Result<SparsePolynomial> {
    let (c, b, k, p, q) = (scn.c, scn.b, scn.k, scn.p, scn.q);
    if h.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: h.p() });
    }
    let nv = c;
    let all_labels: Vec<usize> = (1..=c).collect();
    let pool: Vec<usize> = (b + 1..=c).collect();
    let k_sets = k_subsets(&pool, k);

    // Coset denominators e_b over C \ K, their total product, and the
    // partial products leaving one factor out (prefix x suffix).
    let s2: Vec<SparsePolynomial> = k_sets
        .iter()
        .map(|ks| {
            let vars: Vec<usize> = all_labels.iter().filter(|m| !ks.contains(**m)).map(|m| m - 1).collect();
            SparsePolynomial::esym(nv, &vars, b)
        })
        .collect();
    let n = s2.len();
    let one = SparsePolynomial::constant(nv, BigInt::from(1));
    let mut prefix = vec![one.clone(); n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i].mul(&s2[i])?;
    }
    let mut suffix = vec![one.clone(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].mul(&s2[i])?;
    }
    let d_prod = prefix[n].clone();
    let partial = |i: usize| -> Result<SparsePolynomial> { prefix[i].mul(&suffix[i + 1]) };

    let s4 = SparsePolynomial::esym(nv, &(0..c).collect::<Vec<_>>(), b);

    // Group the distinct-element subscripts [j] <= [h] by their element set;
    // W_J collects the leading q-products of odds as monomials.
    let mut w_polys: HashMap<u64, (Vec<usize>, SparsePolynomial)> = HashMap::new();
    let bounds = h.entries();
    let mut tuple = vec![0usize; p];
    fn rec(
        bounds: &[usize],
        alpha: usize,
        used: u64,
        q: usize,
        nv: usize,
        tuple: &mut Vec<usize>,
        w_polys: &mut HashMap<u64, (Vec<usize>, SparsePolynomial)>,
    ) {
        if alpha == bounds.len() {
            let mut exps = vec![0u32; nv];
            for &jv in tuple.iter().take(q) {
                exps[jv - 1] += 1;
            }
            let entry = w_polys.entry(used).or_insert_with(|| {
                let mut elems: Vec<usize> = tuple.clone();
                elems.sort_unstable();
                (elems, SparsePolynomial::zero(nv))
            });
            entry.1 = entry.1.add(&SparsePolynomial::monomial(nv, exps, BigInt::from(1)));
            return;
        }
        for jv in 1..=bounds[alpha] {
            let bit = 1u64 << (jv - 1);
            if used & bit == 0 {
                tuple[alpha] = jv;
                rec(bounds, alpha + 1, used | bit, q, nv, tuple, w_polys);
            }
        }
    }
    rec(bounds, 0, 0, q, nv, &mut tuple, &mut w_polys);

    let mut term1 = SparsePolynomial::zero(nv);
    let mut term2 = SparsePolynomial::zero(nv);
    let mut grouped: Vec<(&u64, &(Vec<usize>, SparsePolynomial))> = w_polys.iter().collect();
    grouped.sort_by_key(|(mask, _)| **mask);
    for (_, (elems, w_poly)) in grouped {
        // A_J: sum over K avoiding J of S1 * (product of the other coset
        // denominators).
        let mut a_j = SparsePolynomial::zero(nv);
        for (idx, ks) in k_sets.iter().enumerate() {
            if elems.iter().any(|&m| ks.contains(m)) {
                continue;
            }
            let vars: Vec<usize> = all_labels
                .iter()
                .filter(|m| !ks.contains(**m) && !elems.contains(*m))
                .map(|m| m - 1)
                .collect();
            let s1 = SparsePolynomial::esym(nv, &vars, b - q);
            a_j = a_j.add(&s1.mul(&partial(idx)?)?);
        }
        term1 = term1.add(&w_poly.mul(&a_j)?);
        let vars: Vec<usize> = all_labels.iter().filter(|m| !elems.contains(*m)).map(|m| m - 1).collect();
        let s3 = SparsePolynomial::esym(nv, &vars, b - q);
        term2 = term2.add(&w_poly.mul(&s3)?);
    }
    let scale = binomial_int(c + q - b - p, k as i64);
    let left = s4.mul(&term1)?;
    let right = term2.mul(&d_prod)?.mul_scalar(&scale);
    Ok(left.sub(&right))
}

/// The positive denominator product `D_prod(w) * S4(w)` scaled by the
/// multiplicity prefactor, such that `P / this = S_[h](a+)` pointwise.
pub fn cusum_denominator_value(scn: &Scenario, w: &OddsVector<ExactScalar>) -> Result<ExactScalar> {
    let (c, b, k, p, q) = (scn.c, scn.b, scn.k, scn.p, scn.q);
    let pool: Vec<usize> = (b + 1..=c).collect();
    let mut d_prod = ExactScalar::from_integer(1.into());
    for ks in k_subsets(&pool, k) {
        let vals = w.values_excluding(|m| ks.contains(m));
        d_prod *= crate::combinatorics::elementary_symmetric(&vals, b);
    }
    let s4 = crate::combinatorics::elementary_symmetric(w.entries(), b);
    let prefactor = ExactScalar::from_integer(crate::combinatorics::factorial(p))
        * crate::combinatorics::binomial(b, q as i64)
        * crate::combinatorics::binomial(c - b - k, (p - q) as i64)
        / crate::combinatorics::binomial(p, q as i64);
    Ok(d_prod * s4 * prefactor)
}

/// Change of variables `w_j = 1 + s_j + s_{j+1} + ... + s_c`, mapping the
/// ordered region `{w_1 >= ... >= w_c >= 1}` onto `{s >= 0}`.
pub fn difference_substitution(poly: &SparsePolynomial) -> Result<SparsePolynomial> {
    let nv = poly.nvars();
    // Linear forms and a memo of their powers.
    let linear: Vec<SparsePolynomial> = (0..nv)
        .map(|j| {
            let mut f = SparsePolynomial::constant(nv, BigInt::from(1));
            for m in j..nv {
                let mut exps = vec![0u32; nv];
                exps[m] = 1;
                f = f.add(&SparsePolynomial::monomial(nv, exps, BigInt::from(1)));
            }
            f
        })
        .collect();
    let mut powers: HashMap<(usize, u32), SparsePolynomial> = HashMap::new();
    let power_of = |j: usize, e: u32, powers: &mut HashMap<(usize, u32), SparsePolynomial>| -> Result<SparsePolynomial> {
        if e == 0 {
            return Ok(SparsePolynomial::constant(nv, BigInt::from(1)));
        }
        if let Some(p) = powers.get(&(j, e)) {
            return Ok(p.clone());
        }
        let mut acc = linear[j].clone();
        for _ in 1..e {
            acc = acc.mul(&linear[j])?;
        }
        powers.insert((j, e), acc.clone());
        Ok(acc)
    };
    let mut out = SparsePolynomial::zero(nv);
    for (exps, coeff) in poly.terms() {
        let mut term = SparsePolynomial::constant(nv, coeff.clone());
        for (j, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&power_of(j, e, &mut powers)?)?;
            }
        }
        out = out.add(&term);
        if out.num_terms() > MONOMIAL_CAP {
            return Err(Error::ExpansionCap { monomials: out.num_terms(), cap: MONOMIAL_CAP });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateStatus {
    /// All substituted coefficients nonnegative and constant term positive:
    /// positivity holds on the whole ordered region.
    Certified,
    /// The sufficient criterion did not apply; not a refutation.
    Inconclusive,
    /// Expansion exceeded the monomial cap.
    Cap,
}

/// Outcome of a certificate attempt.
#[derive(Debug, Clone)]
pub struct CertificateResult {
    pub status: CertificateStatus,
    /// Sign of the substituted constant term, i.e. of the equal-odds cusum.
    pub constant_term_sign: i8,
    pub negative_coefficient_count: usize,
    /// The numerator polynomial was identically zero (the known equality
    /// case at the unconstrained subscript).
    pub identically_zero: bool,
    pub monomials: usize,
    /// Numeric fallback verdict, filled by the caller when inconclusive.
    pub fallback: Option<SweepVerdict>,
}

/// Attempts the coefficient-nonnegativity certificate for one instance.
pub fn certify_positivity(scn: &Scenario, h: &CusumSubscript) -> Result<CertificateResult> {
    let numerator = match cusum_numerator_polynomial(scn, h) {
        Ok(p) => p,
        Err(Error::ExpansionCap { monomials, .. }) => {
            return Ok(CertificateResult {
                status: CertificateStatus::Cap,
                constant_term_sign: 0,
                negative_coefficient_count: 0,
                identically_zero: false,
                monomials,
                fallback: None,
            })
        }
        Err(e) => return Err(e),
    };
    if numerator.is_zero() {
        return Ok(CertificateResult {
            status: CertificateStatus::Inconclusive,
            constant_term_sign: 0,
            negative_coefficient_count: 0,
            identically_zero: true,
            monomials: 0,
            fallback: None,
        });
    }
    let substituted = match difference_substitution(&numerator) {
        Ok(p) => p,
        Err(Error::ExpansionCap { monomials, .. }) => {
            return Ok(CertificateResult {
                status: CertificateStatus::Cap,
                constant_term_sign: 0,
                negative_coefficient_count: 0,
                identically_zero: false,
                monomials,
                fallback: None,
            })
        }
        Err(e) => return Err(e),
    };
    let constant = substituted.constant_term();
    let constant_term_sign = match constant.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    };
    let negative_coefficient_count = substituted.negative_coefficient_count();
    let status = if negative_coefficient_count == 0 && constant_term_sign > 0 {
        CertificateStatus::Certified
    } else {
        CertificateStatus::Inconclusive
    };
    Ok(CertificateResult {
        status,
        constant_term_sign,
        negative_coefficient_count,
        identically_zero: false,
        monomials: substituted.num_terms(),
        fallback: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVerdict {
    /// Every sampled value was strictly positive.
    Positive,
    /// Every sampled value was exactly zero.
    IdenticallyZero,
    /// Some sampled value was zero or negative.
    NonPositiveFound,
}

/// Outcome of a numeric sweep for one subscript.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub h: CusumSubscript,
    pub verdict: SweepVerdict,
    pub min_value: ExactScalar,
    pub min_w: Vec<ExactScalar>,
    pub samples: usize,
}

/// Evaluates the cusums of many subscripts of one scenario at seeded odds
/// draws (sample 0 is always all-equal), sharing the per-draw caches.
pub fn numeric_sweep(
    scn: &Scenario,
    subscripts: &[CusumSubscript],
    samples: usize,
    seed: u64,
) -> Result<Vec<SweepOutcome>> {
    let mut mins: Vec<Option<(ExactScalar, Vec<ExactScalar>)>> = vec![None; subscripts.len()];
    let mut all_zero = vec![true; subscripts.len()];
    let mut non_positive = vec![false; subscripts.len()];
    for sample in 0..samples {
        let mut rng = SplitMix64::derive(
            seed,
            &[scn.c as u64, scn.b as u64, scn.k as u64, scn.p as u64, scn.q as u64, sample as u64],
        );
        let w = draw_odds(&mut rng, scn.c, sample);
        let mut inst = AplusInstance::from_scenario(scn, w.clone())?;
        for (t, h) in subscripts.iter().enumerate() {
            let value = inst.cusum_at_aplus(h)?;
            if !value.is_zero() {
                all_zero[t] = false;
            }
            if !value.is_positive_value() && !value.is_zero() {
                non_positive[t] = true;
            }
            if value.is_zero() && h.is_contributing() {
                non_positive[t] = true;
            }
            let replace = match &mins[t] {
                None => true,
                Some((m, _)) => value < *m,
            };
            if replace {
                mins[t] = Some((value, w.entries().to_vec()));
            }
        }
    }
    Ok(subscripts
        .iter()
        .enumerate()
        .map(|(t, h)| {
            let (min_value, min_w) = mins[t].clone().expect("samples >= 1");
            let verdict = if all_zero[t] {
                SweepVerdict::IdenticallyZero
            } else if non_positive[t] {
                SweepVerdict::NonPositiveFound
            } else {
                SweepVerdict::Positive
            };
            SweepOutcome { h: h.clone(), verdict, min_value, min_w, samples }
        })
        .collect())
}

/// Exact values of the stage-one path `G(x) = S_[h](r, ..., r, x, ..., x,
/// 0, ..., 0)` at the integer grid `x = 1..r` with `r = grid_points`,
/// together with the limit value at `x -> 0+`.
#[derive(Debug, Clone)]
pub struct PathCheck {
    pub aplus_value: ExactScalar,
    pub values: Vec<ExactScalar>,
    pub all_positive: bool,
    pub nondecreasing: bool,
}

/// Relative monotonicity tolerance (the path may be exactly constant).
fn monotone_tolerance(values: &[ExactScalar]) -> ExactScalar {
    let mut scale = ExactScalar::zero();
    for v in values {
        let a = if v.is_positive_value() { v.clone() } else { -v.clone() };
        if a > scale {
            scale = a;
        }
    }
    scale * rat(1, 1_000_000_000)
}

/// Checks positivity and monotonicity of the stage-one path for one
/// contributing subscript. Sampling at integer `x` with `r = grid_points`
/// keeps every evaluation exact; `grid_points >= 8`.
pub fn theorem31_path_check(
    scn: &Scenario,
    h: &CusumSubscript,
    w: &OddsVector<ExactScalar>,
    grid_points: usize,
) -> Result<PathCheck> {
    if grid_points < 8 {
        return Err(Error::OutOfRange("grid must have at least 8 points".into()));
    }
    if !h.is_contributing() {
        return Err(Error::NonContributing);
    }
    let (c, b, k) = (scn.c, scn.b, scn.k);
    let r = grid_points as i64;
    // The limit value: a non-unit r is absorbed into the odds.
    let v = w.pow_entries(r)?;
    let mut inst = AplusInstance::from_scenario(scn, v)?;
    let aplus_value = inst.cusum_at_aplus(h)?;
    let mut values = Vec::with_capacity(grid_points);
    for x in 1..=r {
        let mut entries = vec![int(r); b];
        entries.extend(std::iter::repeat_n(int(x), c - b - k));
        entries.extend(std::iter::repeat_n(int(0), k));
        let cfg = Configuration::new(entries, b, k)?;
        values.push(eval_cusum(&scn.superscript, h, &cfg, w)?);
    }
    let all_positive = values.iter().all(|v| v.is_positive_value());
    let mut seq = vec![aplus_value.clone()];
    seq.extend(values.iter().cloned());
    let tol = monotone_tolerance(&seq);
    let nondecreasing = seq.windows(2).all(|p| p[1].clone() >= p[0].clone() - tol.clone());
    Ok(PathCheck { aplus_value, values, all_positive, nondecreasing })
}

/// Convenience: the full superscript `(1, ..., c-k)` scenario used by the
/// main positivity theorem.
pub fn full_superscript_scenario(c: usize, b: usize, k: usize) -> Result<Scenario> {
    let positions: Vec<usize> = (1..=c - k).collect();
    let i = MultiIndex::new(positions, c, k)?;
    Scenario::with_superscript(c, b, k, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn polynomial_basics() {
        let x = SparsePolynomial::monomial(2, vec![1, 0], BigInt::from(1));
        let y = SparsePolynomial::monomial(2, vec![0, 1], BigInt::from(1));
        let p = x.add(&y).mul(&x.sub(&y)).unwrap(); // x^2 - y^2
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.evaluate(&[int(3), int(2)]), int(5));
        let e2 = SparsePolynomial::esym(3, &[0, 1, 2], 2);
        assert_eq!(e2.evaluate(&[int(2), int(1), int(1)]), int(5));
    }

    #[test]
    fn substitution_telescopes() {
        // w_1 - w_2 -> s_1 and w_3 - 1 -> s_3 (c = 3).
        let w1 = SparsePolynomial::monomial(3, vec![1, 0, 0], BigInt::from(1));
        let w2 = SparsePolynomial::monomial(3, vec![0, 1, 0], BigInt::from(1));
        let w3 = SparsePolynomial::monomial(3, vec![0, 0, 1], BigInt::from(1));
        let one = SparsePolynomial::constant(3, BigInt::from(1));
        let d = difference_substitution(&w1.sub(&w2)).unwrap();
        assert_eq!(d, SparsePolynomial::monomial(3, vec![1, 0, 0], BigInt::from(1)));
        let d = difference_substitution(&w3.sub(&one)).unwrap();
        assert_eq!(d, SparsePolynomial::monomial(3, vec![0, 0, 1], BigInt::from(1)));
    }

    #[test]
    fn substitution_agrees_pointwise() {
        let scn = Scenario::representative(3, 1, 1, 1, 1).unwrap();
        let h = CusumSubscript::new(vec![2], 3).unwrap();
        let p = cusum_numerator_polynomial(&scn, &h).unwrap();
        let sub = difference_substitution(&p).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let s: Vec<ExactScalar> = (0..3).map(|_| rat(rng.below_inclusive(64) as i64, 16)).collect();
            // w_j = 1 + s_j + ... + s_c.
            let w: Vec<ExactScalar> = (0..3)
                .map(|j| s[j..].iter().fold(int(1), |acc, t| acc + t.clone()))
                .collect();
            assert_eq!(p.evaluate(&w), sub.evaluate(&s));
        }
    }

    #[test]
    fn numerator_tracks_engine_cusum() {
        let scn = Scenario::representative(4, 2, 1, 2, 1).unwrap();
        let h = CusumSubscript::new(vec![1, 3], 4).unwrap();
        let p = cusum_numerator_polynomial(&scn, &h).unwrap();
        let mut rng = SplitMix64::new(5);
        for sample in 0..20 {
            let w = draw_odds(&mut rng, 4, sample + 1);
            let mut inst = AplusInstance::from_scenario(&scn, w.clone()).unwrap();
            let cusum = inst.cusum_at_aplus(&h).unwrap();
            let den = cusum_denominator_value(&scn, &w).unwrap();
            let point: Vec<ExactScalar> = w.entries().to_vec();
            assert_eq!(p.evaluate(&point), cusum * den);
        }
    }

    #[test]
    fn desk_certificate_is_conclusive() {
        let scn = Scenario::representative(3, 1, 1, 1, 1).unwrap();
        let h = CusumSubscript::new(vec![1], 3).unwrap();
        let cert = certify_positivity(&scn, &h).unwrap();
        assert!(cert.constant_term_sign > 0);
        // If the sufficient criterion fails here, the sweep must succeed.
        if cert.status != CertificateStatus::Certified {
            let sweep = numeric_sweep(&scn, &[h], 50, 7).unwrap();
            assert_eq!(sweep[0].verdict, SweepVerdict::Positive);
        }
    }

    #[test]
    fn full_box_certificate_is_identically_zero() {
        let scn = Scenario::representative(3, 1, 1, 1, 1).unwrap();
        let h = CusumSubscript::new(vec![3], 3).unwrap();
        let cert = certify_positivity(&scn, &h).unwrap();
        assert!(cert.identically_zero);
        assert_eq!(cert.status, CertificateStatus::Inconclusive);
        let sweep = numeric_sweep(&scn, &[h], 10, 7).unwrap();
        assert_eq!(sweep[0].verdict, SweepVerdict::IdenticallyZero);
    }

    #[test]
    fn non_contributing_numerator_is_zero_polynomial() {
        let scn = Scenario::representative(4, 2, 1, 3, 2).unwrap();
        let h = CusumSubscript::new(vec![1, 2, 2], 4).unwrap();
        let p = cusum_numerator_polynomial(&scn, &h).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn theorem31_desk_path() {
        // c=3, b=1, k=1, h=(2), i=(1): the limit value is 1/6 and the
        // path is positive and nondecreasing; at x = r it reaches 1/4
        // after rescaling to r = 1 (checked separately below).
        let scn = Scenario::representative(3, 1, 1, 1, 1).unwrap();
        let h = CusumSubscript::new(vec![2], 3).unwrap();
        let w = OddsVector::new(vec![int(2), int(1), int(1)]).unwrap();
        // Direct check at r = 1, x = 1: S_(2)((1,1,0)) = 1/4.
        let cfg = Configuration::new(vec![int(1), int(1), int(0)], 1, 1).unwrap();
        let g_at_r = eval_cusum(&scn.superscript, &h, &cfg, &w).unwrap();
        assert_eq!(g_at_r, rat(1, 4));
        let chk = theorem31_path_check(&scn, &h, &w, 8).unwrap();
        assert!(chk.all_positive);
        assert!(chk.nondecreasing);
        // The limit value for r = 8 equals the a+ cusum with odds w^8.
        let v = w.pow_entries(8).unwrap();
        let mut inst = AplusInstance::from_scenario(&scn, v).unwrap();
        assert_eq!(chk.aplus_value, inst.cusum_at_aplus(&h).unwrap());
    }

    #[test]
    fn theorem31_equal_odds_path_is_constant() {
        // With all odds equal, every ratio is count-based and free of the
        // exponents, so the path sits at the equal-odds margin throughout.
        let scn = full_superscript_scenario(4, 1, 1).unwrap();
        let h = CusumSubscript::new(vec![1, 2, 3], 4).unwrap();
        let w = OddsVector::all_ones(4);
        let chk = theorem31_path_check(&scn, &h, &w, 8).unwrap();
        assert!(chk.all_positive && chk.nondecreasing);
        for v in &chk.values {
            assert_eq!(*v, chk.aplus_value);
        }
    }

    #[test]
    fn theorem31_degenerate_case_is_constant() {
        // b=2, c=4, k=1, h=(2,1,3), w=(w1,w2,1,1): the path is constant and
        // equal to the limit value.
        let scn = full_superscript_scenario(4, 2, 1).unwrap();
        let h = CusumSubscript::new(vec![2, 1, 3], 4).unwrap();
        let w = OddsVector::new(vec![int(3), int(2), int(1), int(1)]).unwrap();
        let chk = theorem31_path_check(&scn, &h, &w, 8).unwrap();
        assert!(chk.all_positive);
        for v in &chk.values {
            assert_eq!(*v, chk.aplus_value);
        }
    }
}
