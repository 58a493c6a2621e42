//! Dual-mode scalars: exact arbitrary-precision rationals and 64-bit floats.
//!
//! Every evaluation routine in this crate is generic over [`Scalar`]. The
//! exact mode ([`ExactScalar`]) is the default for verification verdicts;
//! the float mode exists for real exponents, finite-difference checks, and
//! curve scans where exactness is not required.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// reduced). `BigRational` maintains exactly the invariants we need.
pub type ExactScalar = BigRational;

/// Shorthand for an integer-valued exact scalar.
pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `num/den` rendering, e.g. `1/6` or `23` for integers.
pub fn format_rational(x: &ExactScalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num/den` (or a bare integer) into an exact scalar.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::OutOfRange(format!("bad rational literal {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::OutOfRange(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// The arithmetic interface shared by exact and float evaluation.
///
/// Implementations must be total on the values the toolkit produces: all
/// weights are >= 1 and all denominators are strictly positive.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + One
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_rational(r: &ExactScalar) -> Self;

    /// Raises `self` to a configuration exponent. Exact mode rejects
    /// non-integer exponents; float mode goes through the log domain.
    fn pow_exponent(&self, exponent: &Self) -> Result<Self>;

    /// Comparison against zero that is exact for rationals.
    fn is_positive_value(&self) -> bool;

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&int(n as i64))
    }
}

impl Scalar for ExactScalar {
    fn from_rational(r: &ExactScalar) -> Self {
        r.clone()
    }

    fn pow_exponent(&self, exponent: &Self) -> Result<Self> {
        if !exponent.is_integer() {
            return Err(Error::NonIntegerExponent);
        }
        let e = exponent
            .to_integer()
            .to_i32()
            .ok_or(Error::NonIntegerExponent)?;
        if e == 0 {
            return Ok(BigRational::one());
        }
        if self.is_zero() && e < 0 {
            return Err(Error::OutOfRange("0 raised to a negative power".into()));
        }
        Ok(self.pow(e))
    }

    fn is_positive_value(&self) -> bool {
        self.numer().sign() == Sign::Plus
    }
}

impl Scalar for f64 {
    fn from_rational(r: &ExactScalar) -> Self {
        r.to_f64().expect("rational out of f64 range")
    }

    fn pow_exponent(&self, exponent: &Self) -> Result<Self> {
        // Log-domain product: weights are >= 1, so ln is safe; exponent 0
        // contributes a factor of exactly 1 even for w = 1.
        if *exponent == 0.0 {
            return Ok(1.0);
        }
        if *self <= 0.0 {
            return Err(Error::OutOfRange("log-domain power of non-positive base".into()));
        }
        Ok((exponent * self.ln()).exp())
    }

    fn is_positive_value(&self) -> bool {
        *self > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let x = rat(-3, 12);
        assert_eq!(format_rational(&x), "-1/4");
        assert_eq!(parse_rational("-1/4").unwrap(), x);
        assert_eq!(parse_rational("23").unwrap(), int(23));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn exact_pow_rejects_non_integer() {
        let half = rat(1, 2);
        assert_eq!(int(2).pow_exponent(&int(3)).unwrap(), int(8));
        assert!(matches!(
            int(2).pow_exponent(&half),
            Err(Error::NonIntegerExponent)
        ));
    }

    #[test]
    fn float_pow_zero_exponent_is_one() {
        assert_eq!(1.0f64.pow_exponent(&0.0).unwrap(), 1.0);
        let v = 2.0f64.pow_exponent(&0.5).unwrap();
        assert!((v - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn float_formatting_has_17_significant_digits() {
        let s = format_float(6.626_773_049_645_39);
        assert_eq!(s, "6.6267730496453900e0");
    }
}
