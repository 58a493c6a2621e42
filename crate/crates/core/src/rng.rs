//! Deterministic seeded randomness for sweeps.
//!
//! A hand-rolled SplitMix64 keeps every drawn sample reproducible forever,
//! independent of external crate versions. Work items derive their own
//! stream seeds from the command seed plus their coordinates, so parallel
//! execution order never changes what gets drawn.

use crate::muirhead::{Configuration, OddsVector};
use crate::scalar::{int, rat, ExactScalar};
use crate::Result;

/// SplitMix64 generator (Steele, Lea & Flood's standard constants).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent stream from a base seed and coordinates,
    /// e.g. `(c, b, k, p, q, sample)`.
    pub fn derive(seed: u64, parts: &[u64]) -> Self {
        let mut rng = SplitMix64::new(seed);
        for &p in parts {
            rng.state = rng.state.wrapping_add(p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            rng.next_u64();
        }
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..=max` (modulo bias is irrelevant at our sizes
    /// and keeps the draw sequence simple and stable).
    pub fn below_inclusive(&mut self, max: u64) -> u64 {
        self.next_u64() % (max + 1)
    }
}

/// Draws an ordered odds vector `w_j = 1 + z_j` with `z_j = n_j/64`,
/// `n_j` uniform in `0..=256`, sorted descending. Sample index 0 is always
/// the all-equal vector so the equal-odds boundary is covered.
pub fn draw_odds(rng: &mut SplitMix64, c: usize, sample: usize) -> OddsVector<ExactScalar> {
    if sample == 0 {
        return OddsVector::all_ones(c);
    }
    let mut z: Vec<u64> = (0..c).map(|_| rng.below_inclusive(256)).collect();
    z.sort_unstable_by(|a, b| b.cmp(a));
    let entries = z.into_iter().map(|n| int(1) + rat(n as i64, 64)).collect();
    OddsVector::new(entries).expect("sorted draw is a valid odds vector")
}

/// Draws a random integer-exponent ordered configuration with distinguished
/// value `r` at position `b` and exactly `k` trailing zeros. Every such
/// configuration weakly submajorizes its extreme form from below, and it
/// differs from it whenever `k <= c - b - 1` because the middle entries are
/// strictly positive.
pub fn draw_configuration(
    rng: &mut SplitMix64,
    c: usize,
    b: usize,
    k: usize,
) -> Result<Configuration<ExactScalar>> {
    let r = 1 + rng.below_inclusive(2) as i64; // r in 1..=3
    let mut entries = Vec::with_capacity(c);
    let mut head: Vec<i64> = (0..b.saturating_sub(1))
        .map(|_| r + rng.below_inclusive(3) as i64)
        .collect();
    head.sort_unstable_by(|a, b| b.cmp(a));
    entries.extend(head.into_iter().map(int));
    entries.push(int(r)); // position b
    let mut middle: Vec<i64> = (0..c - b - k)
        .map(|_| 1 + rng.below_inclusive((r - 1) as u64) as i64)
        .collect();
    middle.sort_unstable_by(|a, b| b.cmp(a));
    entries.extend(middle.into_iter().map(int));
    entries.extend((0..k).map(|_| int(0)));
    Configuration::new(entries, b, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = {
            let mut r = SplitMix64::derive(7, &[3, 1, 1, 2]);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = SplitMix64::derive(7, &[3, 1, 1, 2]);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u64> = {
            let mut r = SplitMix64::derive(7, &[3, 1, 1, 3]);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn sample_zero_is_all_equal() {
        let mut rng = SplitMix64::new(1);
        let w = draw_odds(&mut rng, 4, 0);
        assert!(w.entries().iter().all(|x| *x == int(1)));
        let w1 = draw_odds(&mut rng, 4, 1);
        assert!(w1.entries().windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn drawn_configurations_are_valid() {
        for seed in 0..20 {
            let mut rng = SplitMix64::new(seed);
            let cfg = draw_configuration(&mut rng, 5, 2, 1).unwrap();
            assert_eq!(cfg.c(), 5);
            assert!(!cfg.is_star());
        }
    }
}
