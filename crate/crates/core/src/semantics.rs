//! Standard and metric evaluation of propositional formulas.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::value::TruthValue;

/// Which end of `[0,1]` counts as absolute truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticsMode {
    /// `&` is the t-norm, `→` its residuum, `⊥ = 0`, designated value 1.
    Standard,
    /// `&` is the t-conorm, `→` its residuum, `⊥ = 1`, designated value 0.
    Metric,
}

impl SemanticsMode {
    pub const ALL: [SemanticsMode; 2] = [SemanticsMode::Standard, SemanticsMode::Metric];

    pub fn name(self) -> &'static str {
        match self {
            SemanticsMode::Standard => "standard",
            SemanticsMode::Metric => "metric",
        }
    }

    pub fn designated(self) -> TruthValue {
        match self {
            SemanticsMode::Standard => TruthValue::one(),
            SemanticsMode::Metric => TruthValue::zero(),
        }
    }

    pub fn bottom(self) -> TruthValue {
        self.designated().complement()
    }

    pub fn is_designated(self, v: &TruthValue) -> bool {
        *v == self.designated()
    }

    /// `true` when `a` is at least as true as `b` in this mode's order.
    pub fn at_least_as_true(self, a: &TruthValue, b: &TruthValue) -> bool {
        match self {
            SemanticsMode::Standard => a >= b,
            SemanticsMode::Metric => a <= b,
        }
    }

    pub fn dual(self) -> SemanticsMode {
        match self {
            SemanticsMode::Standard => SemanticsMode::Metric,
            SemanticsMode::Metric => SemanticsMode::Standard,
        }
    }
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "std" => Ok(SemanticsMode::Standard),
            "metric" => Ok(SemanticsMode::Metric),
            _ => Err(Error::UnknownSymbol(s.into())),
        }
    }
}

/// Truth-function table for one algebra read in one semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connectives {
    pub mode: SemanticsMode,
    pub algebra: Algebra,
}

impl Connectives {
    pub fn new(mode: SemanticsMode, algebra: Algebra) -> Connectives {
        Connectives { mode, algebra }
    }

    pub fn bottom(&self) -> TruthValue {
        self.mode.bottom()
    }

    pub fn top(&self) -> TruthValue {
        self.mode.designated()
    }

    pub fn strong(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.mode {
            SemanticsMode::Standard => self.algebra.tnorm(x, y),
            SemanticsMode::Metric => self.algebra.tconorm(x, y),
        }
    }

    pub fn implies(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.mode {
            SemanticsMode::Standard => self.algebra.residuum(x, y),
            SemanticsMode::Metric => self.algebra.coresiduum(x, y),
        }
    }

    /// The weak conjunction: min in standard order, max in metric order.
    pub fn and(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.mode {
            SemanticsMode::Standard => x.min(y).clone(),
            SemanticsMode::Metric => x.max(y).clone(),
        }
    }

    pub fn or(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.mode {
            SemanticsMode::Standard => x.max(y).clone(),
            SemanticsMode::Metric => x.min(y).clone(),
        }
    }

    pub fn not(&self, x: &TruthValue) -> TruthValue {
        self.implies(x, &self.bottom())
    }

    pub fn iff(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        self.strong(&self.implies(x, y), &self.implies(y, x))
    }

    pub fn pow(&self, x: &TruthValue, n: u32) -> TruthValue {
        let mut acc = x.clone();
        for _ in 1..n {
            acc = self.strong(&acc, x);
        }
        acc
    }

    /// Combines the instances of a universal quantifier: inf (standard) or sup (metric).
    pub fn forall<I: IntoIterator<Item = TruthValue>>(&self, values: I) -> TruthValue {
        values.into_iter().fold(self.top(), |acc, v| self.and(&acc, &v))
    }

    /// Combines the instances of an existential quantifier: sup (standard) or inf (metric).
    pub fn exists<I: IntoIterator<Item = TruthValue>>(&self, values: I) -> TruthValue {
        values.into_iter().fold(self.bottom(), |acc, v| self.or(&acc, &v))
    }
}

/// An assignment of truth values to atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Evaluation {
    values: BTreeMap<String, TruthValue>,
}

impl Evaluation {
    pub fn new() -> Evaluation {
        Evaluation::default()
    }

    pub fn insert(&mut self, atom: &str, value: TruthValue) -> Option<TruthValue> {
        self.values.insert(atom.into(), value)
    }

    pub fn get(&self, atom: &str) -> Option<&TruthValue> {
        self.values.get(atom)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &TruthValue)> {
        self.values.iter()
    }

    /// `p ↦ 1 - v(p)`.
    pub fn dual(&self) -> Evaluation {
        Evaluation { values: self.values.iter().map(|(k, v)| (k.clone(), v.complement())).collect() }
    }
}

impl FromIterator<(String, TruthValue)> for Evaluation {
    fn from_iter<I: IntoIterator<Item = (String, TruthValue)>>(iter: I) -> Self {
        Evaluation { values: iter.into_iter().collect() }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Value of a propositional formula under `v`.
///
/// Derived connectives are evaluated with their closed-form truth functions;
/// these agree with the values of their desugared expansions.
pub fn evaluate(sem: SemanticsMode, a: Algebra, f: &Formula, v: &Evaluation) -> Result<TruthValue> {
    eval_with(&Connectives::new(sem, a), f, v)
}

fn eval_with(c: &Connectives, f: &Formula, v: &Evaluation) -> Result<TruthValue> {
    use Formula::*;
    Ok(match f {
        Atom(p) => v.get(p).cloned().ok_or_else(|| Error::MissingAssignment(p.clone()))?,
        Pred(p, args) if args.is_empty() => v.get(p).cloned().ok_or_else(|| Error::MissingAssignment(p.clone()))?,
        Pred(..) | Forall(..) | Exists(..) => return Err(Error::NotPropositional),
        Bottom => c.bottom(),
        Top => c.top(),
        Strong(x, y) => c.strong(&eval_with(c, x, v)?, &eval_with(c, y, v)?),
        Implies(x, y) => c.implies(&eval_with(c, x, v)?, &eval_with(c, y, v)?),
        And(x, y) => c.and(&eval_with(c, x, v)?, &eval_with(c, y, v)?),
        Or(x, y) => c.or(&eval_with(c, x, v)?, &eval_with(c, y, v)?),
        Iff(x, y) => c.iff(&eval_with(c, x, v)?, &eval_with(c, y, v)?),
        Not(x) => c.not(&eval_with(c, x, v)?),
        StrongPow(x, n) => c.pow(&eval_with(c, x, v)?, *n),
    })
}
