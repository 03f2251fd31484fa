//! Exact truth values.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// An exact rational in `[0, 1]`, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthValue(Rational);

impl TruthValue {
    pub fn zero() -> Self {
        TruthValue(Rational::zero())
    }

    pub fn one() -> Self {
        TruthValue(Rational::one())
    }

    pub fn new(r: Rational) -> Result<Self> {
        if r.is_negative() || r > Rational::one() {
            return Err(Error::OutOfUnitInterval(r.to_string()));
        }
        Ok(TruthValue(r))
    }

    /// `numer / denom`, checked to lie in `[0, 1]`.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidRational(alloc::format!("{numer}/{denom}")));
        }
        Self::new(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Caller guarantees the range invariant.
    pub(crate) fn from_rational_unchecked(r: Rational) -> Self {
        debug_assert!(!r.is_negative() && r <= Rational::one(), "{r} escaped [0,1]");
        TruthValue(r)
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - x`.
    pub fn complement(&self) -> Self {
        TruthValue(Rational::one() - &self.0)
    }

    /// `{0, 1/n, ..., 1}`.
    pub fn grid(n: u32) -> Vec<TruthValue> {
        assert!(n >= 1, "grid needs at least one step");
        let denom = BigInt::from(n);
        (0..=n)
            .map(|i| TruthValue(Rational::new(BigInt::from(i), denom.clone())))
            .collect()
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy conversion for plotting and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for TruthValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TruthValue::new(parse_rational(s)?)
    }
}

/// Parses `p/q` or an integer, with an optional leading `-`.
///
/// Decimal notation is rejected so that every input is exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidRational(String::from(t));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str, allow_sign: bool| -> Result<BigInt> {
        let digits = if allow_sign { s.strip_prefix('-').unwrap_or(s) } else { s };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let n = parse_int(num, true)?;
    let d = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}
