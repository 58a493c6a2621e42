//! Ground-truth evaluation of `F(a)`, multi-index F-components, and
//! multi-cusums by direct permutation enumeration.
//!
//! This module exists to be obviously correct, not fast: every quantity is
//! a literal sum over coset and full-group permutations. The fast engine in
//! [`crate::aplus`] is always checked against it.

use std::collections::HashMap;

use crate::combinatorics::{binomial, coset, full_group, k_subsets, Permutation};
use crate::error::Error;
use crate::scalar::{ExactScalar, Scalar};
use crate::Result;

/// Direct enumeration is capped here; beyond this the engine must be used.
pub const ENUMERATION_CAP: usize = 8;

/// An ordered configuration vector: `c` non-increasing exponents with the
/// distinguished value `r` at position `b` and `k` declared trailing zeros.
///
/// The strict form requires the middle entries `a_{b+1}..a_{c-k}` to be
/// positive. The limit form `a+` keeps `k` as the declared zero count while
/// the middle entries sit at zero; by continuity, evaluating there yields
/// the limit value of any ordered positive sequence approaching it.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<S: Scalar> {
    entries: Vec<S>,
    b: usize,
    k: usize,
}

impl<S: Scalar> Configuration<S> {
    /// Builds a strict configuration: exactly `k` trailing zeros and
    /// positive entries elsewhere.
    pub fn new(entries: Vec<S>, b: usize, k: usize) -> Result<Self> {
        let c = entries.len();
        if b == 0 || b + k > c {
            return Err(Error::OutOfRange(format!("b = {b}, k = {k} with c = {c}")));
        }
        for pair in entries.windows(2) {
            if pair[0] < pair[1] {
                return Err(Error::OutOfRange("entries must be non-increasing".into()));
            }
        }
        if !entries[b - 1].is_positive_value() {
            return Err(Error::OutOfRange("r = a_b must be positive".into()));
        }
        if c - k > 0 && !entries[c - k - 1].is_positive_value() {
            return Err(Error::OutOfRange("middle entries must be positive".into()));
        }
        if entries[c - k..].iter().any(|e| !e.is_zero()) {
            return Err(Error::OutOfRange("last k entries must be zero".into()));
        }
        Ok(Configuration { entries, b, k })
    }

    /// The extreme configuration `a* = (r, ..., r, 0, ..., 0)` with `b`
    /// leading `r`'s; its zero count is `c - b`.
    pub fn a_star(c: usize, b: usize, r: S) -> Result<Self> {
        let mut entries = vec![S::zero(); c];
        for e in entries.iter_mut().take(b) {
            *e = r.clone();
        }
        Configuration::new(entries, b, c - b)
    }

    /// The limit form `a+`: `b` entries equal to `r`, `c - b - k` middle
    /// entries at zero standing in for an ordered positive sequence
    /// approaching zero, and `k` true zeros.
    pub fn a_plus(c: usize, b: usize, k: usize, r: S) -> Result<Self> {
        if b == 0 || b + k > c {
            return Err(Error::OutOfRange(format!("b = {b}, k = {k} with c = {c}")));
        }
        if !r.is_positive_value() {
            return Err(Error::OutOfRange("r must be positive".into()));
        }
        let mut entries = vec![S::zero(); c];
        for e in entries.iter_mut().take(b) {
            *e = r.clone();
        }
        Ok(Configuration { entries, b, k })
    }

    /// Internal constructor for perturbed float configurations whose
    /// ordering has already been verified by the caller.
    fn from_parts_unchecked(entries: Vec<S>, b: usize, k: usize) -> Self {
        Configuration { entries, b, k }
    }

    pub fn c(&self) -> usize {
        self.entries.len()
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> &S {
        &self.entries[self.b - 1]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// Exponent vector of the companion extreme configuration.
    pub fn star_exponents(&self) -> Vec<S> {
        let mut exps = vec![S::zero(); self.c()];
        for e in exps.iter_mut().take(self.b) {
            *e = self.r().clone();
        }
        exps
    }

    pub fn is_star(&self) -> bool {
        self.entries[self.b..].iter().all(|e| e.is_zero())
    }
}

/// An ordered odds vector `w_1 >= ... >= w_c >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddsVector<S: Scalar> {
    entries: Vec<S>,
}

impl<S: Scalar> OddsVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::OutOfRange("odds vector must be non-empty".into()));
        }
        for pair in entries.windows(2) {
            if pair[0] < pair[1] {
                return Err(Error::OutOfRange("odds must be non-increasing".into()));
            }
        }
        if *entries.last().unwrap() < S::one() {
            return Err(Error::OutOfRange("odds must be >= 1".into()));
        }
        Ok(OddsVector { entries })
    }

    pub fn all_ones(c: usize) -> Self {
        OddsVector {
            entries: vec![S::one(); c],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for population label `m` (1-based).
    pub fn get(&self, m: usize) -> &S {
        &self.entries[m - 1]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// Index of the last entry strictly above 1, or 0 when all equal 1.
    pub fn lambda(&self) -> usize {
        self.entries
            .iter()
            .rposition(|w| *w > S::one())
            .map(|i| i + 1)
            .unwrap_or(0)
    }

    /// Values at the labels of `C` that are not excluded, in label order.
    pub fn values_excluding(&self, excluded: impl Fn(usize) -> bool) -> Vec<S> {
        (1..=self.len())
            .filter(|&m| !excluded(m))
            .map(|m| self.entries[m - 1].clone())
            .collect()
    }

    /// Pointwise integer power, e.g. the vector `v = w^r` absorbing a
    /// non-unit `r` at the limit configuration.
    pub fn pow_entries(&self, r: i64) -> Result<Self> {
        let e = S::from_rational(&crate::scalar::int(r));
        let entries = self
            .entries
            .iter()
            .map(|w| w.pow_exponent(&e))
            .collect::<Result<Vec<S>>>()?;
        Ok(OddsVector { entries })
    }
}

/// A strictly increasing `p`-tuple of superscript positions in `{1..c-k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    positions: Vec<usize>,
}

impl MultiIndex {
    pub fn new(positions: Vec<usize>, c: usize, k: usize) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::OutOfRange("superscript must be non-empty".into()));
        }
        for pair in positions.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::OutOfRange("superscript must strictly increase".into()));
            }
        }
        if positions[0] == 0 || *positions.last().unwrap() > c - k {
            return Err(Error::OutOfRange(format!("superscript not within 1..{}", c - k)));
        }
        Ok(MultiIndex { positions })
    }

    pub fn p(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Number of superscript elements at or below `b`.
    pub fn q_for(&self, b: usize) -> usize {
        self.positions.iter().filter(|&&i| i <= b).count()
    }
}

/// A cusum subscript: `p` entries in `{1..c}`, order and duplication free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CusumSubscript {
    entries: Vec<usize>,
}

impl CusumSubscript {
    pub fn new(entries: Vec<usize>, c: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::OutOfRange("subscript must be non-empty".into()));
        }
        if entries.iter().any(|&h| h == 0 || h > c) {
            return Err(Error::OutOfRange(format!("subscript not within 1..{c}")));
        }
        Ok(CusumSubscript { entries })
    }

    pub fn p(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn sorted_ascending(&self) -> Vec<usize> {
        let mut s = self.entries.clone();
        s.sort_unstable();
        s
    }

    /// A subscript contributes exactly when its ascending rearrangement
    /// satisfies `h'_alpha >= alpha` for every position.
    pub fn is_contributing(&self) -> bool {
        self.sorted_ascending()
            .iter()
            .enumerate()
            .all(|(alpha, &v)| v > alpha)
    }

    pub fn extended_binomial(&self) -> ExactScalar {
        crate::combinatorics::extended_binomial(&self.entries, self.p())
    }
}

/// One verification instance: the constants `(c, b, k, p, q)` together with
/// a representative superscript.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub c: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub superscript: MultiIndex,
}

impl Scenario {
    /// Validates the ranges `1 <= b < c`, `1 <= k <= c-b-1`, `1 <= p <= c-k`,
    /// `max(0, b+k+p-c) <= q <= min(b, p)` and attaches the representative
    /// superscript `(1, ..., q, b+1, ..., b+p-q)`.
    pub fn representative(c: usize, b: usize, k: usize, p: usize, q: usize) -> Result<Self> {
        if b == 0 || b >= c {
            return Err(Error::OutOfRange(format!("b = {b} with c = {c}")));
        }
        if k == 0 || k + b + 1 > c {
            return Err(Error::OutOfRange(format!("k = {k} with c = {c}, b = {b}")));
        }
        if p == 0 || p > c - k {
            return Err(Error::OutOfRange(format!("p = {p} with c-k = {}", c - k)));
        }
        let q_lo = (b + k + p).saturating_sub(c);
        let q_hi = b.min(p);
        if q < q_lo || q > q_hi {
            return Err(Error::OutOfRange(format!("q = {q} outside [{q_lo}, {q_hi}]")));
        }
        let mut positions: Vec<usize> = (1..=q).collect();
        positions.extend(b + 1..=b + p - q);
        let superscript = MultiIndex::new(positions, c, k)?;
        Ok(Scenario { c, b, k, p, q, superscript })
    }

    /// Builds a scenario from an explicit superscript, deriving `q`.
    pub fn with_superscript(c: usize, b: usize, k: usize, superscript: MultiIndex) -> Result<Self> {
        let p = superscript.p();
        let q = superscript.q_for(b);
        let base = Scenario::representative(c, b, k, p, q)?;
        Ok(Scenario { superscript, ..base })
    }
}

fn check_cap(c: usize) -> Result<()> {
    if c > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { c, cap: ENUMERATION_CAP });
    }
    Ok(())
}

/// `w_pi^a = w_{pi(1)}^{a_1} ... w_{pi(c)}^{a_c}`. Zero exponents contribute
/// a factor of exactly 1 even for unit weights.
pub fn weight_product<S: Scalar>(
    pi: &Permutation,
    a: &Configuration<S>,
    w: &OddsVector<S>,
) -> Result<S> {
    weight_product_over(pi, a.entries(), w)
}

fn weight_product_over<S: Scalar>(pi: &Permutation, exps: &[S], w: &OddsVector<S>) -> Result<S> {
    let mut prod = S::one();
    for (m, e) in exps.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        prod = prod * w.get(pi.apply(m + 1)).pow_exponent(e)?;
    }
    Ok(prod)
}

/// Standardized Muirhead ratio over an explicit permutation set.
pub fn muirhead_ratio<S: Scalar>(
    perms: &[Permutation],
    a: &Configuration<S>,
    a_star: &Configuration<S>,
    w: &OddsVector<S>,
) -> Result<S> {
    if perms.is_empty() {
        return Err(Error::EmptyPermutationSet);
    }
    let mut num = S::zero();
    let mut den = S::zero();
    for pi in perms {
        num = num + weight_product(pi, a, w)?;
        den = den + weight_product(pi, a_star, w)?;
    }
    Ok(num / den)
}

/// Constrained numerator over denominator: the building block of every
/// component, with the numerator restricted to `pi(i_alpha) = j_alpha`.
fn restricted_ratio<S: Scalar>(
    perms: &[Permutation],
    constraint: Option<(&[usize], &[usize])>,
    exps: &[S],
    star: &[S],
    w: &OddsVector<S>,
) -> Result<S> {
    let mut num = S::zero();
    let mut den = S::zero();
    for pi in perms {
        let ok = match constraint {
            None => true,
            Some((pos, vals)) => pos.iter().zip(vals).all(|(&i, &j)| pi.apply(i) == j),
        };
        if ok {
            num = num + weight_product_over(pi, exps, w)?;
        }
        den = den + weight_product_over(pi, star, w)?;
    }
    Ok(num / den)
}

/// `F(a)`: the sum of coset Muirhead ratios minus `C(c-b, k)` times the
/// full-group ratio. Positive for every strict `a` submajorizing `a*`.
pub fn eval_f<S: Scalar>(a: &Configuration<S>, w: &OddsVector<S>) -> Result<S> {
    let (c, b, k) = (a.c(), a.b(), a.k());
    check_cap(c)?;
    let exps = a.entries();
    let star = a.star_exponents();
    let pool: Vec<usize> = (b + 1..=c).collect();
    let mut total = S::zero();
    for big_k in k_subsets(&pool, k) {
        let perms = coset(&big_k, c, k)?;
        total = total + restricted_ratio(&perms, None, exps, &star, w)?;
    }
    let group = full_group(c);
    let full = restricted_ratio(&group, None, exps, &star, w)?;
    let count = S::from_rational(&binomial(c - b, k as i64));
    Ok(total - count * full)
}

/// Multi-index F-component: numerators restricted to `pi(i) = (j)`,
/// denominators unrestricted; exactly zero on repeated subscript entries.
pub fn eval_component<S: Scalar>(
    i: &MultiIndex,
    j: &CusumSubscript,
    a: &Configuration<S>,
    w: &OddsVector<S>,
) -> Result<S> {
    let (c, b, k) = (a.c(), a.b(), a.k());
    check_cap(c)?;
    if i.p() != j.p() {
        return Err(Error::DimensionMismatch { expected: i.p(), found: j.p() });
    }
    let mut sorted = j.sorted_ascending();
    sorted.dedup();
    if sorted.len() != j.p() {
        return Ok(S::zero());
    }
    let exps = a.entries();
    let star = a.star_exponents();
    let constraint = Some((i.positions(), j.entries()));
    let pool: Vec<usize> = (b + 1..=c).collect();
    let mut total = S::zero();
    for big_k in k_subsets(&pool, k) {
        let perms = coset(&big_k, c, k)?;
        total = total + restricted_ratio(&perms, constraint, exps, &star, w)?;
    }
    let group = full_group(c);
    let full = restricted_ratio(&group, constraint, exps, &star, w)?;
    let count = S::from_rational(&binomial(c - b, k as i64));
    Ok(total - count * full)
}

/// Multi-cusum: the iterated sum of components over `1 <= j_alpha <= h_alpha`.
pub fn eval_cusum<S: Scalar>(
    i: &MultiIndex,
    h: &CusumSubscript,
    a: &Configuration<S>,
    w: &OddsVector<S>,
) -> Result<S> {
    if i.p() != h.p() {
        return Err(Error::DimensionMismatch { expected: i.p(), found: h.p() });
    }
    let table = CusumTable::build(i, a, w)?;
    Ok(table.cusum(h))
}

/// All components for a fixed superscript, with every cusum readable off a
/// multi-dimensional prefix-sum array. One build serves every subscript.
pub struct CusumTable<S: Scalar> {
    c: usize,
    p: usize,
    prefix: Vec<S>,
    components: HashMap<Vec<usize>, S>,
}

impl<S: Scalar> CusumTable<S> {
    pub fn build(i: &MultiIndex, a: &Configuration<S>, w: &OddsVector<S>) -> Result<Self> {
        let (c, b, k) = (a.c(), a.b(), a.k());
        check_cap(c)?;
        let p = i.p();
        let exps = a.entries();
        let star = a.star_exponents();
        let pool: Vec<usize> = (b + 1..=c).collect();
        let count = S::from_rational(&binomial(c - b, k as i64));

        // Accumulate restricted numerators bucketed by the image tuple
        // (pi(i_1), ..., pi(i_p)); a single pass per permutation set.
        let mut components: HashMap<Vec<usize>, S> = HashMap::new();
        let mut scan = |perms: &[Permutation], weight: &S| -> Result<()> {
            let mut den = S::zero();
            for pi in perms {
                den = den + weight_product_over(pi, &star, w)?;
            }
            for pi in perms {
                let key: Vec<usize> = i.positions().iter().map(|&m| pi.apply(m)).collect();
                let term = weight_product_over(pi, exps, w)? / den.clone() * weight.clone();
                components
                    .entry(key)
                    .and_modify(|v| *v = v.clone() + term.clone())
                    .or_insert(term);
            }
            Ok(())
        };
        for big_k in k_subsets(&pool, k) {
            let perms = coset(&big_k, c, k)?;
            scan(&perms, &S::one())?;
        }
        let group = full_group(c);
        scan(&group, &(S::zero() - count))?;

        // Prefix sums over the (c+1)^p lattice; index 0 in any axis is the
        // empty sum.
        let dim = c + 1;
        let size = dim.pow(p as u32);
        let mut prefix = vec![S::zero(); size];
        for (key, val) in &components {
            let mut idx = 0usize;
            for &j in key {
                idx = idx * dim + j;
            }
            prefix[idx] = val.clone();
        }
        let mut stride = 1usize;
        for _axis in 0..p {
            for idx in 0..size {
                let coord = (idx / stride) % dim;
                if coord >= 1 {
                    let prev = prefix[idx - stride].clone();
                    prefix[idx] = prefix[idx].clone() + prev;
                }
            }
            stride *= dim;
        }
        Ok(CusumTable { c, p, prefix, components })
    }

    /// The component at a distinct-entry subscript (zero otherwise).
    pub fn component(&self, j: &[usize]) -> S {
        self.components.get(j).cloned().unwrap_or_else(S::zero)
    }

    /// The cusum at subscript `h` (entries in `1..=c`).
    pub fn cusum(&self, h: &CusumSubscript) -> S {
        debug_assert_eq!(h.p(), self.p);
        let dim = self.c + 1;
        let mut idx = 0usize;
        // The prefix array's axis order mirrors the key construction above:
        // the first subscript entry is the most significant digit.
        for &t in h.entries() {
            idx = idx * dim + t;
        }
        self.prefix[idx].clone()
    }
}

/// Weak submajorization from below: every prefix sum of `a` dominates the
/// corresponding prefix sum of `a_star`.
pub fn submajorizes<S: Scalar>(a: &Configuration<S>, a_star: &Configuration<S>) -> Result<bool> {
    if a.c() != a_star.c() {
        return Err(Error::DimensionMismatch { expected: a.c(), found: a_star.c() });
    }
    let mut lhs = S::zero();
    let mut rhs = S::zero();
    for (x, y) in a.entries().iter().zip(a_star.entries()) {
        lhs = lhs + x.clone();
        rhs = rhs + y.clone();
        if lhs < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spot check of the derivative identity
/// `(d/da_i) F_(j)(a) = F_(j)(a) log w_{j_i}` by central finite differences.
///
/// `alpha` selects the superscript position to perturb (0-based). Returns
/// the residual `|fd - analytic|` scaled by `max(|analytic|, |F|, 1e-9)`.
pub fn derivative_identity_check(
    i: &MultiIndex,
    alpha: usize,
    j: &CusumSubscript,
    a: &Configuration<f64>,
    w: &OddsVector<f64>,
    step: f64,
) -> Result<f64> {
    if alpha >= i.p() {
        return Err(Error::OutOfRange(format!("alpha = {alpha} with p = {}", i.p())));
    }
    let pos = i.positions()[alpha];
    let entries = a.entries();
    let c = a.c();
    let up = entries[pos - 1] + step;
    let down = entries[pos - 1] - step;
    if pos >= 2 && up > entries[pos - 2] {
        return Err(Error::StepTooLarge);
    }
    if pos < c && down < entries[pos] {
        return Err(Error::StepTooLarge);
    }
    if down <= 0.0 {
        return Err(Error::StepTooLarge);
    }

    let perturbed = |x: f64| {
        let mut e = entries.to_vec();
        e[pos - 1] = x;
        Configuration::from_parts_unchecked(e, a.b(), a.k())
    };
    let f_plus = eval_component(i, j, &perturbed(up), w)?;
    let f_minus = eval_component(i, j, &perturbed(down), w)?;
    let fd = (f_plus - f_minus) / (2.0 * step);
    let f_here = eval_component(i, j, a, w)?;
    let analytic = f_here * (w.get(j.entries()[alpha]).ln());
    let scale = analytic.abs().max(f_here.abs()).max(1e-9);
    Ok((fd - analytic).abs() / scale)
}
