//! Exact combinatorial primitives shared by every evaluation engine.
//!
//! Population labels and positions are 1-based throughout, matching the
//! usual convention for configuration vectors `a = (a_1, ..., a_c)` and
//! odds vectors `w = (w_1, ..., w_c)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{ExactScalar, Scalar};
use crate::Result;

/// A bijection on `{1..c}`; `apply(m)` is the image of position `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(c: usize) -> Self {
        Permutation {
            map: (1..=c).collect(),
        }
    }

    /// Builds a permutation from its one-line notation `(pi(1), ..., pi(c))`.
    pub fn from_mapping(map: Vec<usize>) -> Result<Self> {
        let c = map.len();
        let mut seen = vec![false; c + 1];
        for &v in &map {
            if v == 0 || v > c || seen[v] {
                return Err(Error::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    /// The transposition `(x y)` on `{1..c}`.
    pub fn transposition(c: usize, x: usize, y: usize) -> Result<Self> {
        if x == 0 || y == 0 || x > c || y > c {
            return Err(Error::OutOfRange(format!("transposition ({x} {y}) on 1..{c}")));
        }
        let mut map: Vec<usize> = (1..=c).collect();
        map.swap(x - 1, y - 1);
        Ok(Permutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image of position `m` (1-based).
    pub fn apply(&self, m: usize) -> usize {
        self.map[m - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Function composition: `(self.compose(other))(m) = self(other(m))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            map: (1..=other.len()).map(|m| self.apply(other.apply(m))).collect(),
        })
    }

    pub fn one_line(&self) -> &[usize] {
        &self.map
    }
}

/// A sorted, duplicate-free subset of `{1..c}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    elems: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::OutOfRange("duplicate element in index set".into()));
        }
        if elems.first().is_some_and(|&e| e == 0) {
            return Err(Error::OutOfRange("index sets are 1-based".into()));
        }
        Ok(IndexSet { elems })
    }

    pub fn empty() -> Self {
        IndexSet { elems: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.iter().copied()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.elems.iter().all(|&x| !other.contains(x))
    }

    /// Bitmask with bit `x-1` set for each element `x`; requires `c <= 64`.
    pub fn bitmask(&self) -> u64 {
        self.elems.iter().fold(0u64, |m, &x| m | (1u64 << (x - 1)))
    }
}

/// Standard binomial coefficient as a big integer; 0 when `r < 0` or `r > n`.
pub fn binomial_int(n: usize, r: i64) -> BigInt {
    if r < 0 || r as usize > n {
        return BigInt::zero();
    }
    let r = (r as usize).min(n - r as usize);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Binomial coefficient as an exact scalar.
pub fn binomial(n: usize, r: i64) -> ExactScalar {
    BigRational::from_integer(binomial_int(n, r))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Extended binomial coefficient of a cusum subscript:
/// `h'_1 (h'_2 - 1) ... (h'_p - p + 1) / p!` with `h'` sorted ascending.
///
/// `p!` times the result counts the distinct-element subscripts `[j] <= [h]`,
/// and the result is exactly 0 when the subscript is non-contributing.
pub fn extended_binomial(h: &[usize], p: usize) -> ExactScalar {
    assert_eq!(h.len(), p, "subscript length must equal p");
    let mut sorted = h.to_vec();
    sorted.sort_unstable();
    let mut num = BigInt::one();
    for (alpha, &v) in sorted.iter().enumerate() {
        if v <= alpha {
            return ExactScalar::zero();
        }
        num *= BigInt::from(v - alpha);
    }
    BigRational::new(num, factorial(p))
}

/// Sum of all products of `degree` distinct entries, by the one-pass
/// recurrence `e_d <- e_d + v * e_{d-1}`. Returns 1 for degree 0 and 0 when
/// the degree exceeds the number of values.
pub fn elementary_symmetric<S: Scalar>(values: &[S], degree: usize) -> S {
    if degree > values.len() {
        return S::zero();
    }
    let mut e: Vec<S> = Vec::with_capacity(degree + 1);
    e.push(S::one());
    for _ in 0..degree {
        e.push(S::zero());
    }
    for v in values {
        let top = degree.min(values.len());
        for d in (1..=top).rev() {
            e[d] = e[d].clone() + v.clone() * e[d - 1].clone();
        }
    }
    e.swap_remove(degree)
}

/// All `k`-element subsets of `pool`, in lexicographic order.
pub fn k_subsets(pool: &[usize], k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if k > pool.len() {
        return out;
    }
    let mut current = Vec::with_capacity(k);
    fn rec(pool: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if current.len() == k {
            out.push(IndexSet {
                elems: current.clone(),
            });
            return;
        }
        let need = k - current.len();
        for i in start..=pool.len().saturating_sub(need) {
            current.push(pool[i]);
            rec(pool, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(pool, k, 0, &mut current, &mut out);
    out
}

/// The permutation sending `K` onto the tail block `Z = {c-k+1..c}` by
/// transposing the q-th element of `K \ Z` with the q-th element of `Z \ K`
/// (both taken in ascending order); the identity when `K = Z`.
pub fn sigma_k(big_k: &IndexSet, c: usize, k: usize) -> Result<Permutation> {
    if big_k.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: big_k.len(),
        });
    }
    if big_k.iter().any(|x| x > c) {
        return Err(Error::OutOfRange(format!("K not contained in 1..{c}")));
    }
    let z_start = c - k + 1;
    let k_minus_z: Vec<usize> = big_k.iter().filter(|&x| x < z_start).collect();
    let z_minus_k: Vec<usize> = (z_start..=c).filter(|x| !big_k.contains(*x)).collect();
    debug_assert_eq!(k_minus_z.len(), z_minus_k.len());
    let mut map: Vec<usize> = (1..=c).collect();
    for (&x, &z) in k_minus_z.iter().zip(z_minus_k.iter()) {
        map.swap(x - 1, z - 1);
    }
    Ok(Permutation { map })
}

/// All arrangements of `values` in lexicographic order.
fn arrangements(values: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut current = Vec::with_capacity(sorted.len());
    fn rec(
        sorted: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == sorted.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..sorted.len() {
            if !used[i] {
                used[i] = true;
                current.push(sorted[i]);
                rec(sorted, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(&sorted, &mut used, &mut current, &mut out);
    out
}

/// The left coset attached to `K`: the `(c-k)!` permutations that agree
/// with `sigma_K` on the tail block `Z` (so `pi(Z) = K`) and map the head
/// block `I = {1..c-k}` onto `C \ K` in every possible way.
///
/// The defining property `pi(Z) = K` is the tested contract: it is the one
/// consistent with the vanishing of constrained coset numerators whenever
/// `K` meets the subscript.
pub fn coset(big_k: &IndexSet, c: usize, k: usize) -> Result<Vec<Permutation>> {
    let sigma = sigma_k(big_k, c, k)?;
    let head: Vec<usize> = (1..=c).filter(|x| !big_k.contains(*x)).collect();
    let tail_images: Vec<usize> = (c - k + 1..=c).map(|z| sigma.apply(z)).collect();
    let mut out = Vec::with_capacity(arrangement_count(c - k));
    for arr in arrangements(&head) {
        let mut map = arr;
        map.extend(tail_images.iter().copied());
        out.push(Permutation { map });
    }
    Ok(out)
}

fn arrangement_count(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// The full symmetric group on `{1..c}` in lexicographic order.
pub fn full_group(c: usize) -> Vec<Permutation> {
    let labels: Vec<usize> = (1..=c).collect();
    arrangements(&labels)
        .into_iter()
        .map(|map| Permutation { map })
        .collect()
}
