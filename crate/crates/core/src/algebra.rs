//! The Łukasiewicz, Gödel and product t-norms, their dual t-conorms, and the
//! residua of both, in closed form over exact rationals.
//!
//! Residua of a t-norm `T` are the adjoints `x ⇒ y = sup{z : T(z, x) ≤ y}`.
//! Residua of a t-conorm `S` (here called *coresidua*) are the adjoints
//! `x ⊸ y = min{z : S(z, x) ≥ y}`. The brute-force [`residuum_oracle`]
//! computes both extremum definitions on a grid and is kept independent of
//! the closed forms.

use core::fmt;
use core::str::FromStr;

use num_traits::One;

use crate::error::{Error, Result};
use crate::value::{Rational, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algebra {
    Lukasiewicz,
    Godel,
    Product,
}

impl Algebra {
    pub const ALL: [Algebra; 3] = [Algebra::Lukasiewicz, Algebra::Godel, Algebra::Product];

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Lukasiewicz => "lukasiewicz",
            Algebra::Godel => "godel",
            Algebra::Product => "product",
        }
    }

    /// `T_L = max{0, x+y-1}`, `T_G = min{x, y}`, `T_π = x·y`.
    pub fn tnorm(self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self {
            Algebra::Lukasiewicz => {
                let s = x.as_rational() + y.as_rational() - Rational::one();
                if s > num_traits::Zero::zero() {
                    TruthValue::from_rational_unchecked(s)
                } else {
                    TruthValue::zero()
                }
            }
            Algebra::Godel => x.min(y).clone(),
            Algebra::Product => TruthValue::from_rational_unchecked(x.as_rational() * y.as_rational()),
        }
    }

    /// Residuum of the t-norm: 1 when `x ≤ y`, else `1-x+y`, `y` or `y/x`.
    pub fn residuum(self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        // x = 0 always takes this branch, so y/x never divides by zero.
        if x <= y {
            return TruthValue::one();
        }
        match self {
            Algebra::Lukasiewicz => {
                TruthValue::from_rational_unchecked(Rational::one() - x.as_rational() + y.as_rational())
            }
            Algebra::Godel => y.clone(),
            Algebra::Product => TruthValue::from_rational_unchecked(y.as_rational() / x.as_rational()),
        }
    }

    /// `S_L = min{x+y, 1}`, `S_G = max{x, y}`, `S_π = x+y-xy`.
    pub fn tconorm(self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self {
            Algebra::Lukasiewicz => {
                let s = x.as_rational() + y.as_rational();
                if s < Rational::one() {
                    TruthValue::from_rational_unchecked(s)
                } else {
                    TruthValue::one()
                }
            }
            Algebra::Godel => x.max(y).clone(),
            Algebra::Product => {
                let (a, b) = (x.as_rational(), y.as_rational());
                TruthValue::from_rational_unchecked(a + b - a * b)
            }
        }
    }

    /// Residuum of the t-conorm: 0 when `x ≥ y`, else `y-x`, `y` or `(y-x)/(1-x)`.
    pub fn coresiduum(self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        // x = 1 always takes this branch, so 1-x is never zero below.
        if x >= y {
            return TruthValue::zero();
        }
        let (a, b) = (x.as_rational(), y.as_rational());
        match self {
            Algebra::Lukasiewicz => TruthValue::from_rational_unchecked(b - a),
            Algebra::Godel => y.clone(),
            Algebra::Product => TruthValue::from_rational_unchecked((b - a) / (Rational::one() - a)),
        }
    }

    /// Interpretation of `¬¬` in the standard order: 1 for `x > 0`, 0 for `x = 0`.
    ///
    /// Rejected for Łukasiewicz, where `¬¬x = x`.
    pub fn double_negation(self, x: &TruthValue) -> Result<TruthValue> {
        match self {
            Algebra::Lukasiewicz => Err(Error::Unsupported(
                "double negation is the identity in Lukasiewicz logic; the two-valued bridge does not apply".into(),
            )),
            Algebra::Godel | Algebra::Product => {
                Ok(if x.is_zero() { TruthValue::zero() } else { TruthValue::one() })
            }
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lukasiewicz" | "l" | "luk" => Ok(Algebra::Lukasiewicz),
            "godel" | "g" | "goedel" => Ok(Algebra::Godel),
            "product" | "p" | "pi" => Ok(Algebra::Product),
            _ => Err(Error::UnknownSymbol(s.into())),
        }
    }
}

/// Which extremum definition [`residuum_oracle`] brute-forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// `max{z on grid : T(z, x) ≤ y}`.
    TnormSup,
    /// `min{z on grid : S(z, x) ≥ y}`.
    TconormMin,
}

/// Evaluates the residuum from its extremum definition over `{0, 1/n, ..., 1}`.
///
/// The result is within `1/n` of the closed form: below it for
/// [`OracleMode::TnormSup`], above it for [`OracleMode::TconormMin`].
pub fn residuum_oracle(a: Algebra, mode: OracleMode, x: &TruthValue, y: &TruthValue, n: u32) -> Result<TruthValue> {
    if n < 2 {
        return Err(Error::Precondition(alloc::format!("oracle grid must be at least 2, got {n}")));
    }
    let grid = TruthValue::grid(n);
    let found = match mode {
        OracleMode::TnormSup => grid.into_iter().rev().find(|z| a.tnorm(z, x) <= *y),
        OracleMode::TconormMin => grid.into_iter().find(|z| a.tconorm(z, x) >= *y),
    };
    // z = 0 always satisfies T(0,x) = 0 ≤ y, and z = 1 always satisfies S(1,x) = 1 ≥ y.
    Ok(found.expect("grid endpoints always satisfy the extremum condition"))
}
