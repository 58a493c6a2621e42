//! Exact verification toolkit for positivity of multi-index cusums of
//! standardized Muirhead ratios over permutation cosets.
//!
//! The crate is organized in layers:
//!
//! * [`combinatorics`] — exact integer/rational primitives: permutations,
//!   index sets, binomials, elementary symmetric polynomials, and the
//!   `sigma_K` cosets.
//! * [`muirhead`] — the ground-truth oracle: direct permutation enumeration
//!   of `F(a)`, multi-index F-components and multi-cusums, in exact rational
//!   or 64-bit float mode.
//! * [`aplus`] — the fast engine for the limit configuration `a+`: tuplet
//!   re-expressions of components and cusums, cross-product ratios, and the
//!   weighted-average positivity criterion.
//! * [`lemmas`] — equal-odds averages, the sequential-uniform probability
//!   model with its stochastic-dominance checks, single-index sign patterns,
//!   average-ratio bounds, and the plus/minus average decomposition.
//! * [`simplex`] — two-valued boundary odds vectors, large-omega limits,
//!   weighted-average curves, shape scans, and CSV emission.
//! * [`certify`] — symbolic positivity certificates for cleared-denominator
//!   cusum numerators, exact numeric sweeps, and monotone path checks.
//! * [`record`] — the JSONL verification-record schema shared by the CLI and
//!   the browser demo.

pub mod aplus;
pub mod certify;
pub mod combinatorics;
pub mod error;
pub mod lemmas;
pub mod muirhead;
pub mod record;
pub mod rng;
pub mod scalar;
pub mod simplex;

pub use error::Error;
pub use scalar::{ExactScalar, Scalar};

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
