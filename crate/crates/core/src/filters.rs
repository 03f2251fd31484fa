//! Filters on finite index sets, `D`-limits in compact Gödel sets, and the
//! order lemma.
//!
//! Subsets of an index set with `n` elements are bitmasks over positions
//! `0..n`, so position `i` is bit `1 << i`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::metric::{compact_in_dg, sequence_hits, KDescriptor};
use crate::sequence::SequenceExpr;
use crate::value::{Rational, TruthValue};

/// Largest index set whose filters can be checked by visiting every subset.
pub const MAX_INDEX: usize = 16;

/// How many leading terms of a sequence family are membership-checked against `V`.
pub const FAMILY_PREFIX: u64 = 64;

/// A family of truth values indexed by a finite set or by `ℕ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Finite(Vec<TruthValue>),
    Sequence(SequenceExpr),
}

impl From<Vec<TruthValue>> for Family {
    fn from(v: Vec<TruthValue>) -> Family {
        Family::Finite(v)
    }
}

/// A filter on a finite set of labels, or the symbolic nonprincipal ultrafilter on `ℕ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterDesc {
    Explicit { index: Vec<u32>, sets: BTreeSet<u64> },
    /// `{A : at ∈ A}`, with `at` a position into `index`.
    Principal { index: Vec<u32>, at: usize },
    /// Any nonprincipal ultrafilter on `ℕ`; only meaningful for convergent families.
    ConvergentTail,
}

fn check_index(index: &[u32]) -> Result<()> {
    if index.is_empty() {
        return Err(Error::InvalidFilter("the index set is empty".into()));
    }
    if index.len() > MAX_INDEX {
        return Err(Error::Budget { what: "index set size", required: index.len() as u128, limit: MAX_INDEX as u128 });
    }
    let distinct: BTreeSet<_> = index.iter().collect();
    if distinct.len() != index.len() {
        return Err(Error::InvalidFilter("index labels repeat".into()));
    }
    Ok(())
}

impl FilterDesc {
    /// The principal ultrafilter on `index` generated by the label `label`.
    pub fn principal(index: Vec<u32>, label: u32) -> Result<FilterDesc> {
        check_index(&index)?;
        let at = index
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::InvalidFilter(format!("{label} is not in the index set")))?;
        Ok(FilterDesc::Principal { index, at })
    }

    /// An explicit family of subsets given by their labels.
    pub fn explicit(index: Vec<u32>, sets: &[Vec<u32>]) -> Result<FilterDesc> {
        check_index(&index)?;
        let mut masks = BTreeSet::new();
        for set in sets {
            let mut m = 0u64;
            for l in set {
                let p = index
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| Error::InvalidFilter(format!("{l} is not in the index set")))?;
                m |= 1 << p;
            }
            masks.insert(m);
        }
        Ok(FilterDesc::Explicit { index, sets: masks })
    }

    /// Every ultrafilter on `0..n`, labelled `1..=n`. On a finite set these are the principal ones.
    pub fn all_ultrafilters(n: usize) -> Vec<FilterDesc> {
        let index: Vec<u32> = (1..=n as u32).collect();
        (0..n).map(|at| FilterDesc::Principal { index: index.clone(), at }).collect()
    }

    pub fn index(&self) -> Option<&[u32]> {
        match self {
            FilterDesc::Explicit { index, .. } | FilterDesc::Principal { index, .. } => Some(index),
            FilterDesc::ConvergentTail => None,
        }
    }

    fn full(&self) -> Option<u64> {
        self.index().map(|i| (1u64 << i.len()) - 1)
    }

    /// Whether the subset `mask` belongs to the filter.
    pub fn contains_set(&self, mask: u64) -> Result<bool> {
        match self {
            FilterDesc::Explicit { sets, .. } => Ok(sets.contains(&mask)),
            FilterDesc::Principal { at, .. } => Ok(mask >> at & 1 == 1),
            FilterDesc::ConvergentTail => {
                Err(Error::InvalidFilter("membership of finite sets in a nonprincipal ultrafilter is symbolic".into()))
            }
        }
    }

    /// Contains the whole index set, excludes the empty set, and is closed upward and under intersection.
    pub fn is_filter(&self) -> bool {
        match self {
            FilterDesc::Explicit { sets, .. } => {
                let full = self.full().expect("finite");
                if !sets.contains(&full) || sets.contains(&0) || sets.iter().any(|m| m & !full != 0) {
                    return false;
                }
                let upward = sets.iter().all(|&a| (0..=full).filter(|b| b & a == a).all(|b| sets.contains(&b)));
                let meets = sets.iter().all(|&a| sets.iter().all(|&b| sets.contains(&(a & b))));
                upward && meets
            }
            FilterDesc::Principal { .. } | FilterDesc::ConvergentTail => true,
        }
    }

    /// A filter containing every subset or its complement.
    pub fn is_ultrafilter(&self) -> bool {
        match self {
            FilterDesc::Explicit { sets, .. } => {
                let full = self.full().expect("finite");
                self.is_filter() && (0..=full).all(|a| sets.contains(&a) || sets.contains(&(full & !a)))
            }
            FilterDesc::Principal { .. } | FilterDesc::ConvergentTail => true,
        }
    }
}

impl fmt::Display for FilterDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterDesc::Principal { index, at } => write!(f, "principal at {} on {}", index[*at], LabelSet(index, !0)),
            FilterDesc::Explicit { index, sets } => {
                write!(f, "filter on {} with sets ", LabelSet(index, !0))?;
                for (i, m) in sets.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", LabelSet(index, *m))?;
                }
                Ok(())
            }
            FilterDesc::ConvergentTail => f.write_str("nonprincipal ultrafilter on N"),
        }
    }
}

/// Renders the labels selected by a mask as `{1,3}`.
pub struct LabelSet<'a>(pub &'a [u32], pub u64);

impl fmt::Display for LabelSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (i, l) in self.0.iter().enumerate() {
            if self.1 >> i & 1 == 1 {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "{l}")?;
            }
        }
        f.write_str("}")
    }
}

/// A subset of `[0,1]` compact under `d_G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GodelSet {
    v: KDescriptor,
}

impl GodelSet {
    pub fn new(v: KDescriptor) -> Result<GodelSet> {
        if !compact_in_dg(&v) {
            return Err(Error::Precondition(format!("{v} is not compact in d_G")));
        }
        Ok(GodelSet { v })
    }

    pub fn finite<I: IntoIterator<Item = TruthValue>>(points: I) -> GodelSet {
        GodelSet { v: KDescriptor::finite(points) }
    }

    /// `{1/n : n ≥ 1} ∪ {0}`.
    pub fn harmonic_closure() -> GodelSet {
        let tail = SequenceExpr::harmonic(Rational::one(), Rational::zero()).expect("1/k is in [0,1]");
        GodelSet { v: KDescriptor { points: [TruthValue::zero()].into_iter().collect(), tail: Some(tail) } }
    }

    pub fn descriptor(&self) -> &KDescriptor {
        &self.v
    }

    pub fn contains(&self, x: &TruthValue) -> bool {
        self.v.contains(x)
    }

    fn require(&self, x: &TruthValue) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ValueOutsideSet(x.clone()))
        }
    }

    /// Checks every value of a finite family, or the first [`FAMILY_PREFIX`] terms and the limit of a sequence.
    pub fn require_family(&self, family: &Family) -> Result<()> {
        match family {
            Family::Finite(xs) => xs.iter().try_for_each(|x| self.require(x)),
            Family::Sequence(s) => {
                (1..=FAMILY_PREFIX).try_for_each(|k| self.require(&s.value_at(k)))?;
                self.require(&s.limit())
            }
        }
    }

    /// Sequence terms of `V` itself, exposed for exhaustive generators.
    pub fn tail_hits(&self, x: &TruthValue) -> bool {
        self.v.tail.as_ref().is_some_and(|t| sequence_hits(t, x))
    }
}

impl fmt::Display for GodelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

fn finite_family<'a>(family: &'a Family, f: &FilterDesc) -> Result<&'a [TruthValue]> {
    let Family::Finite(xs) = family else {
        return Err(Error::InvalidFilter("a sequence family needs the nonprincipal ultrafilter on N".into()));
    };
    let n = f.index().expect("finite filter").len();
    if xs.len() != n {
        return Err(Error::InvalidFilter(format!("family has {} members but the index set has {n}", xs.len())));
    }
    Ok(xs)
}

/// `lim_D x_i` in `V`.
pub fn d_limit(family: &Family, f: &FilterDesc, space: &GodelSet) -> Result<TruthValue> {
    space.require_family(family)?;
    let limit = match f {
        FilterDesc::Principal { at, .. } => finite_family(family, f)?[*at].clone(),
        FilterDesc::Explicit { .. } => {
            let xs = finite_family(family, f)?;
            let values: BTreeSet<&TruthValue> = xs.iter().collect();
            let mut hits = Vec::new();
            for v in values {
                let pre = xs.iter().enumerate().filter(|(_, x)| *x == v).fold(0u64, |m, (i, _)| m | 1 << i);
                if f.contains_set(pre)? {
                    hits.push(v.clone());
                }
            }
            if hits.len() != 1 {
                return Err(Error::NoUniqueLimit);
            }
            hits.pop().expect("one hit")
        }
        FilterDesc::ConvergentTail => match family {
            Family::Sequence(s) => s.limit(),
            Family::Finite(_) => {
                return Err(Error::InvalidFilter("the nonprincipal ultrafilter on N needs a sequence family".into()))
            }
        },
    };
    space.require(&limit)?;
    Ok(limit)
}

/// Both sides of `lim_D x ≤ lim_D y  ⟺  {i : x_i ≤ y_i} ∈ D`, computed independently.
///
/// Under [`FilterDesc::ConvergentTail`] the set `{k : x_k ≤ y_k}` of two
/// catalog sequences is cofinite or finite, so its membership is decided by
/// the eventual comparison.
pub fn order_lemma_check(xs: &Family, ys: &Family, f: &FilterDesc, space: &GodelSet) -> Result<(bool, bool)> {
    let lhs = d_limit(xs, f, space)? <= d_limit(ys, f, space)?;
    let rhs = match (xs, ys, f) {
        (Family::Sequence(x), Family::Sequence(y), FilterDesc::ConvergentTail) => x.eventual_cmp(y)?.0 != Ordering::Greater,
        _ => {
            let (a, b) = (finite_family(xs, f)?, finite_family(ys, f)?);
            let mask = a.iter().zip(b).enumerate().filter(|(_, (x, y))| x <= y).fold(0u64, |m, (i, _)| m | 1 << i);
            f.contains_set(mask)?
        }
    };
    Ok((lhs, rhs))
}

/// Human description of a subset mask over positions.
pub fn mask_string(index: &[u32], mask: u64) -> String {
    format!("{}", LabelSet(index, mask))
}
