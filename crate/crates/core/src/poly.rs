//! Univariate polynomials and rational functions with exact rational
//! coefficients, evaluated at large natural arguments.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::value::Rational;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// `k + d`.
    pub fn shifted_identity(d: Rational) -> Poly {
        Poly::new(vec![d, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * k + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// The sign of `p(k)` for all real `k ≥ N`, together with such an `N ≥ 1`.
    ///
    /// `N` comes from the Cauchy bound `1 + max |c_i / c_lead|` on real roots.
    pub fn eventual_sign(&self) -> (Ordering, u64) {
        let Some(lead) = self.leading() else {
            return (Ordering::Equal, 1);
        };
        let sign = if lead.is_positive() { Ordering::Greater } else { Ordering::Less };
        let mut bound = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c / lead).abs();
            if r > bound {
                bound = r;
            }
        }
        let n = (bound + Rational::one()).floor().to_integer() + BigInt::one();
        (sign, n.to_u64().unwrap_or(u64::MAX).max(1))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// `num / den` where `den(k) > 0` for all `k ≥ 1` considered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn constant(c: Rational) -> RatFn {
        RatFn { num: Poly::constant(c), den: Poly::constant(Rational::one()) }
    }

    /// `a + b / (k + d)` as `(a(k+d) + b) / (k+d)`.
    pub fn harmonic(a: &Rational, b: &Rational, d: &Rational) -> RatFn {
        let den = Poly::shifted_identity(d.clone());
        let num = &(&den * &Poly::constant(a.clone())) + &Poly::constant(b.clone());
        RatFn { num, den }.reduced()
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        self.num.eval(k) / self.den.eval(k)
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn { num: &self.num * &other.num, den: &self.den * &other.den }.reduced()
    }

    /// `self / other`, with the sign of `other.num` eventually `sign`.
    pub fn div(&self, other: &RatFn, sign: Ordering) -> RatFn {
        let mut num = &self.num * &other.den;
        let mut den = &self.den * &other.num;
        if sign == Ordering::Less {
            num = -&num;
            den = -&den;
        }
        RatFn { num, den }.reduced()
    }

    /// Eventual sign of `self - other` with a threshold.
    pub fn compare(&self, other: &RatFn) -> (Ordering, u64) {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).eventual_sign()
    }

    /// Eventual sign of the derivative: `Greater` for increasing, with a threshold.
    pub fn monotonicity(&self) -> (Ordering, u64) {
        (&(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())).eventual_sign()
    }

    /// `lim_{k→∞}`; `None` when unbounded.
    pub fn limit(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(p), Some(q)) if p < q => Some(Rational::zero()),
            (Some(p), Some(q)) if p == q => Some(self.num.leading()? / self.den.leading()?),
            _ => None,
        }
    }

    /// Makes the denominator monic and cancels common powers of `k`.
    fn reduced(self) -> RatFn {
        let RatFn { num, den } = self;
        if num.is_zero() {
            return RatFn { num, den: Poly::constant(Rational::one()) };
        }
        let lead = den.leading().cloned().expect("denominator is nonzero");
        let scale = Rational::one() / lead;
        let mut num = &num * &Poly::constant(scale.clone());
        let mut den = &den * &Poly::constant(scale);
        // Cancel a shared power of k when both have zero constant terms.
        while num.coeffs.first().is_some_and(Zero::is_zero) && den.coeffs.first().is_some_and(Zero::is_zero) {
            num.coeffs.remove(0);
            den.coeffs.remove(0);
        }
        RatFn { num, den }
    }
}
