//! Monotone rational sequences `a + b·g(k)`, `k ≥ 1`, with `g` constant,
//! harmonic `1/(k+d)` or geometric `q^k`, and their eventual order.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::value::{parse_rational, Rational, TruthValue};

/// Largest index the threshold searches may reach.
pub const SEARCH_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SequenceForm {
    Constant,
    /// `g(k) = 1/(k+d)`, `d ≥ 0`.
    Harmonic { d: Rational },
    /// `g(k) = q^k`, `0 < q < 1`.
    Geometric { q: Rational },
}

/// `a + b·g(k)`, valued in `[0,1]` for every `k ≥ 1`.
///
/// Constant sequences are stored with `b = 0`, and any zero `b` makes the
/// form constant, so equal sequences have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceExpr {
    a: Rational,
    b: Rational,
    form: SequenceForm,
}

impl SequenceExpr {
    pub fn new(a: Rational, b: Rational, form: SequenceForm) -> Result<SequenceExpr> {
        let (a, b, form) = match form {
            SequenceForm::Constant => (a + b, Rational::zero(), SequenceForm::Constant),
            _ if b.is_zero() => (a, b, SequenceForm::Constant),
            SequenceForm::Harmonic { d } if d.is_negative() => {
                return Err(Error::Precondition(format!("harmonic offset must be nonnegative, got {d}")));
            }
            SequenceForm::Geometric { q } if !(q.is_positive() && q < Rational::one()) => {
                return Err(Error::Precondition(format!("geometric ratio must lie in (0,1), got {q}")));
            }
            f => (a, b, f),
        };
        let s = SequenceExpr { a, b, form };
        // Monotone, so the first term and the limit bound every value.
        for end in [s.raw_value(1), s.a.clone()] {
            if end.is_negative() || end > Rational::one() {
                return Err(Error::OutOfUnitInterval(format!("sequence {s} reaches {end}")));
            }
        }
        Ok(s)
    }

    pub fn constant(c: TruthValue) -> SequenceExpr {
        SequenceExpr { a: c.into_rational(), b: Rational::zero(), form: SequenceForm::Constant }
    }

    /// `b/(k+d)`.
    pub fn harmonic(b: Rational, d: Rational) -> Result<SequenceExpr> {
        SequenceExpr::new(Rational::zero(), b, SequenceForm::Harmonic { d })
    }

    /// `c·q^k`.
    pub fn geometric(c: Rational, q: Rational) -> Result<SequenceExpr> {
        SequenceExpr::new(Rational::zero(), c, SequenceForm::Geometric { q })
    }

    pub fn offset(&self) -> &Rational {
        &self.a
    }

    pub fn coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn form(&self) -> &SequenceForm {
        &self.form
    }

    pub fn is_constant(&self) -> bool {
        self.form == SequenceForm::Constant
    }

    fn g(&self, k: u64) -> Rational {
        match &self.form {
            SequenceForm::Constant => Rational::one(),
            SequenceForm::Harmonic { d } => Rational::one() / (Rational::from_integer(BigInt::from(k)) + d),
            SequenceForm::Geometric { q } => Pow::pow(q, k),
        }
    }

    fn raw_value(&self, k: u64) -> Rational {
        if self.b.is_zero() {
            return self.a.clone();
        }
        &self.a + &self.b * self.g(k)
    }

    /// The `k`-th term, `k ≥ 1`.
    pub fn value_at(&self, k: u64) -> TruthValue {
        debug_assert!(k >= 1);
        TruthValue::from_rational_unchecked(self.raw_value(k))
    }

    pub fn limit(&self) -> TruthValue {
        TruthValue::from_rational_unchecked(self.a.clone())
    }

    /// `Less` when decreasing, `Greater` when increasing, `Equal` when constant.
    pub fn direction(&self) -> Ordering {
        Rational::zero().cmp(&self.b)
    }

    /// `inf_{k ≥ from}`: the limit when decreasing, else the first term.
    pub fn inf_from(&self, from: u64) -> TruthValue {
        match self.direction() {
            Ordering::Less => self.limit(),
            _ => self.value_at(from),
        }
    }

    /// `sup_{k ≥ from}`: the limit when increasing, else the first term.
    pub fn sup_from(&self, from: u64) -> TruthValue {
        match self.direction() {
            Ordering::Greater => self.limit(),
            _ => self.value_at(from),
        }
    }

    /// `(a(k+d) + b, k+d)` for constant and harmonic forms.
    pub(crate) fn as_fraction(&self) -> Option<(Poly, Poly)> {
        let d = match &self.form {
            SequenceForm::Constant => Rational::zero(),
            SequenceForm::Harmonic { d } => d.clone(),
            SequenceForm::Geometric { .. } => return None,
        };
        let den = Poly::shifted_identity(d);
        let num = &(&den * &Poly::constant(self.a.clone())) + &Poly::constant(self.b.clone());
        Some((num, den))
    }

    /// The sign of `self_k - other_k` for every `k ≥ N`, with such an `N ≥ 1`.
    pub fn eventual_cmp(&self, other: &SequenceExpr) -> Result<(Ordering, u64)> {
        if let (Some((p1, q1)), Some((p2, q2))) = (self.as_fraction(), other.as_fraction()) {
            return Ok((&(&p1 * &q2) - &(&p2 * &q1)).eventual_sign());
        }
        let big_a = &self.a - &other.a;
        if !big_a.is_zero() {
            // Both perturbations shrink monotonically; wait until their sum is below |A|.
            let bound = big_a.abs();
            let n = first_below(1, &bound, |k| self.b.abs() * self.g(k) + other.b.abs() * other.g(k))?;
            return Ok((big_a.sign_ordering(), n));
        }
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => return Ok((Ordering::Equal, 1)),
            (false, true) => return Ok((self.b.sign_ordering(), 1)),
            (true, false) => return Ok((other.b.sign_ordering().reverse(), 1)),
            (false, false) => {}
        }
        use SequenceForm::*;
        match (&self.form, &other.form) {
            (Geometric { q: q1 }, Geometric { q: q2 }) => match q1.cmp(q2) {
                Ordering::Equal => Ok(((&self.b - &other.b).sign_ordering(), 1)),
                Ordering::Greater => {
                    let r = q2 / q1;
                    let n = first_below(1, &self.b.abs(), |k| other.b.abs() * Pow::pow(&r, k))?;
                    Ok((self.b.sign_ordering(), n))
                }
                Ordering::Less => {
                    let r = q1 / q2;
                    let n = first_below(1, &other.b.abs(), |k| self.b.abs() * Pow::pow(&r, k))?;
                    Ok((other.b.sign_ordering().reverse(), n))
                }
            },
            (Harmonic { d }, Geometric { q }) => {
                let n = harmonic_dominates(d, &self.b, q, &other.b)?;
                Ok((self.b.sign_ordering(), n))
            }
            (Geometric { .. }, Harmonic { .. }) => {
                let (s, n) = other.eventual_cmp(self)?;
                Ok((s.reverse(), n))
            }
            _ => unreachable!("constant and harmonic pairs are handled by the polynomial case"),
        }
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for Rational {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&Rational::zero())
    }
}

/// Least `N ≥ start` with `f(N) < bound`, for `f` nonincreasing on `[start, ∞)`.
fn first_below(start: u64, bound: &Rational, f: impl Fn(u64) -> Rational) -> Result<u64> {
    let start = start.max(1);
    if f(start) < *bound {
        return Ok(start);
    }
    let mut lo = start;
    let mut hi = start.max(2);
    while f(hi) >= *bound {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi > SEARCH_CAP {
            return Err(Error::Budget { what: "eventual order threshold", required: hi as u128, limit: SEARCH_CAP as u128 });
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) < *bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Threshold past which `|b1|/(k+d) > |b2| q^k`.
///
/// `(k+d) q^k` is nonincreasing once `k ≥ (q(1+d) - d)/(1-q)`.
fn harmonic_dominates(d: &Rational, b1: &Rational, q: &Rational, b2: &Rational) -> Result<u64> {
    let turn = (q * (Rational::one() + d) - d) / (Rational::one() - q);
    let start = if turn.is_positive() {
        u64::try_from(turn.ceil().to_integer()).map_err(|_| Error::Budget {
            what: "eventual order threshold",
            required: u128::MAX,
            limit: SEARCH_CAP as u128,
        })?
    } else {
        1
    };
    let b2 = b2.abs();
    first_below(start, &b1.abs(), |k| &b2 * (Rational::from_integer(BigInt::from(k)) + d) * Pow::pow(q, k))
}

impl fmt::Display for SequenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            SequenceForm::Constant => write!(f, "{}", self.a),
            SequenceForm::Harmonic { d } => write!(f, "{} + {} * inv(k+{})", self.a, self.b, d),
            SequenceForm::Geometric { q } => write!(f, "{} + {} * pow({})", self.a, self.b, q),
        }
    }
}

impl FromStr for SequenceExpr {
    type Err = Error;

    /// Parses `a`, `a + b * inv(k+d)` or `a + b * pow(q)`.
    fn from_str(s: &str) -> Result<SequenceExpr> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Precondition(format!("malformed sequence `{s}`"));
        let Some((a, rest)) = compact.split_once('+').filter(|_| compact.contains('*')) else {
            return SequenceExpr::new(parse_rational(&compact)?, Rational::zero(), SequenceForm::Constant);
        };
        let (b, g) = rest.split_once('*').ok_or_else(bad)?;
        let (a, b) = (parse_rational(a)?, parse_rational(b)?);
        let form = if let Some(inner) = g.strip_prefix("inv(").and_then(|t| t.strip_suffix(')')) {
            let d = match inner.strip_prefix('k').ok_or_else(bad)? {
                "" => Rational::zero(),
                t => parse_rational(t.strip_prefix('+').ok_or_else(bad)?)?,
            };
            SequenceForm::Harmonic { d }
        } else if let Some(inner) = g.strip_prefix("pow(").and_then(|t| t.strip_suffix(')')) {
            SequenceForm::Geometric { q: parse_rational(inner)? }
        } else {
            return Err(bad());
        };
        SequenceExpr::new(a, b, form)
    }
}
