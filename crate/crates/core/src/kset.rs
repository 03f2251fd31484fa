//! Target sets `K ⊆ [0,1]` for K-satisfiability: finite unions of intervals and points.
//!
//! Text syntax: intervals `[a,b]`, `(a,b)`, `[a,b)`, `(a,b]` and point sets
//! `{p1,p2,...}` joined by `u`, e.g. `[0,1/2) u {3/4}`. `{}` is the empty set.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::value::TruthValue;

/// A nondegenerate interval, `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: TruthValue,
    pub hi: TruthValue,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: TruthValue, hi: TruthValue, lo_closed: bool, hi_closed: bool) -> Interval {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn contains(&self, x: &TruthValue) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// How many pairwise distinct values a set offers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Capacity {
    Finite(usize),
    Infinite,
}

/// A normalized finite union of intervals and isolated points.
///
/// Intervals are sorted, pairwise disjoint and non-adjacent; points lie
/// outside every interval.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KSet {
    intervals: Vec<Interval>,
    points: Vec<TruthValue>,
}

impl KSet {
    pub fn empty() -> KSet {
        KSet::default()
    }

    pub fn unit() -> KSet {
        KSet::interval(TruthValue::zero(), TruthValue::one(), true, true)
    }

    pub fn points<I: IntoIterator<Item = TruthValue>>(points: I) -> KSet {
        KSet::new(Vec::new(), points.into_iter().collect())
    }

    pub fn interval(lo: TruthValue, hi: TruthValue, lo_closed: bool, hi_closed: bool) -> KSet {
        KSet::new(alloc::vec![Interval::new(lo, hi, lo_closed, hi_closed)], Vec::new())
    }

    /// Normalizes an arbitrary union. Intervals with `lo > hi` are empty and dropped.
    pub fn new(intervals: Vec<Interval>, points: Vec<TruthValue>) -> KSet {
        let mut points = points;
        let mut ivs = Vec::new();
        for iv in intervals {
            match iv.lo.cmp(&iv.hi) {
                Ordering::Less => ivs.push(iv),
                Ordering::Equal if iv.lo_closed && iv.hi_closed => points.push(iv.lo),
                _ => {}
            }
        }
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::new();
        for iv in ivs {
            if let Some(last) = merged.last_mut() {
                let joins = match iv.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => iv.lo_closed || last.hi_closed || points.contains(&iv.lo),
                    Ordering::Greater => false,
                };
                if joins {
                    match iv.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = iv.hi;
                            last.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            merged.push(iv);
        }
        // Points on an open endpoint close it; points inside vanish.
        let mut rest = Vec::new();
        for p in points {
            if let Some(iv) = merged.iter_mut().find(|iv| iv.lo == p || iv.hi == p) {
                if iv.lo == p {
                    iv.lo_closed = true;
                } else {
                    iv.hi_closed = true;
                }
                continue;
            }
            if !merged.iter().any(|iv| iv.contains(&p)) {
                rest.push(p);
            }
        }
        rest.sort();
        rest.dedup();
        KSet { intervals: merged, points: rest }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn isolated_points(&self) -> &[TruthValue] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, x: &TruthValue) -> bool {
        self.points.binary_search(x).is_ok() || self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Image under `x ↦ 1 - x`.
    pub fn dual(&self) -> KSet {
        let intervals = self
            .intervals
            .iter()
            .map(|iv| Interval::new(iv.hi.complement(), iv.lo.complement(), iv.hi_closed, iv.lo_closed))
            .collect();
        KSet::new(intervals, self.points.iter().map(TruthValue::complement).collect())
    }

    /// `K ∩ (lo, hi)` for open bounds.
    fn restrict_open(&self, lo: &TruthValue, hi: &TruthValue) -> KSet {
        let mut intervals = Vec::new();
        for iv in &self.intervals {
            let (nlo, nlo_closed) = if iv.lo > *lo { (iv.lo.clone(), iv.lo_closed) } else { (lo.clone(), false) };
            let (nhi, nhi_closed) = if iv.hi < *hi { (iv.hi.clone(), iv.hi_closed) } else { (hi.clone(), false) };
            intervals.push(Interval::new(nlo, nhi, nlo_closed, nhi_closed));
        }
        let points = self.points.iter().filter(|p| *p > lo && *p < hi).cloned().collect();
        KSet::new(intervals, points)
    }

    /// Number of distinct values available in `K ∩ (lo, hi)`.
    pub fn capacity_between(&self, lo: &TruthValue, hi: &TruthValue) -> Capacity {
        let r = self.restrict_open(lo, hi);
        if r.intervals.is_empty() {
            Capacity::Finite(r.points.len())
        } else {
            Capacity::Infinite
        }
    }

    /// `|K ∩ [0,1)|`.
    pub fn capacity_below_one(&self) -> Capacity {
        let zero = usize::from(self.contains(&TruthValue::zero()));
        match self.capacity_between(&TruthValue::zero(), &TruthValue::one()) {
            Capacity::Finite(n) => Capacity::Finite(n + zero),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    /// Smallest-first choice of `r` strictly increasing values of `K ∩ (0,1)`.
    ///
    /// Picks the least element above the previous choice when it exists, and
    /// otherwise a midpoint that leaves the rest of the interval available.
    pub fn increasing_choice(&self, r: usize) -> Option<Vec<TruthValue>> {
        let inner = self.restrict_open(&TruthValue::zero(), &TruthValue::one());
        let mut out: Vec<TruthValue> = Vec::with_capacity(r);
        for _ in 0..r {
            let next = match out.last() {
                None => inner.least_or_inner(None),
                Some(prev) => inner.least_or_inner(Some(prev)),
            }?;
            out.push(next);
        }
        Some(out)
    }

    /// An element strictly above `bound` (or any element): the least one if attained.
    fn least_or_inner(&self, bound: Option<&TruthValue>) -> Option<TruthValue> {
        let above = |x: &TruthValue| bound.is_none_or(|b| x > b);
        let mut best: Option<TruthValue> = self.points.iter().find(|p| above(p)).cloned();
        for iv in &self.intervals {
            if !above(&iv.hi) {
                continue;
            }
            let candidate = match bound {
                Some(b) if *b >= iv.lo => midpoint(b, &iv.hi),
                _ if iv.lo_closed => iv.lo.clone(),
                _ => midpoint(&iv.lo, &iv.hi),
            };
            if best.as_ref().is_none_or(|p| candidate < *p) {
                best = Some(candidate);
            }
            break;
        }
        best
    }
}

fn midpoint(a: &TruthValue, b: &TruthValue) -> TruthValue {
    let two = BigRational::from_integer(2.into());
    TruthValue::from_rational_unchecked((a.as_rational() + b.as_rational()) / two)
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        for iv in &self.intervals {
            if !first {
                f.write_str(" u ")?;
            }
            first = false;
            write!(f, "{iv}")?;
        }
        if !self.points.is_empty() {
            if !first {
                f.write_str(" u ")?;
            }
            f.write_str("{")?;
            for (i, p) in self.points.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for KSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<KSet> {
        let bad = |why: &str| Error::InvalidKSet(format!("{why} in `{s}`"));
        let mut intervals = Vec::new();
        let mut points = Vec::new();
        let text = s.trim();
        if text.is_empty() {
            return Err(bad("empty text"));
        }
        for part in split_union(text) {
            let part = part.trim();
            if let Some(inner) = part.strip_prefix('{').and_then(|p| p.strip_suffix('}')) {
                for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    points.push(item.parse::<TruthValue>()?);
                }
                continue;
            }
            let lo_closed = match part.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(bad("expected `[`, `(` or `{`")),
            };
            let hi_closed = match part.chars().last() {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(bad("expected `]` or `)`")),
            };
            let body = &part[1..part.len() - 1];
            let (lo, hi) = body.split_once(',').ok_or_else(|| bad("interval needs two endpoints"))?;
            let (lo, hi) = (lo.parse::<TruthValue>()?, hi.parse::<TruthValue>()?);
            if lo > hi {
                return Err(bad("interval endpoints out of order"));
            }
            intervals.push(Interval::new(lo, hi, lo_closed, hi_closed));
        }
        Ok(KSet::new(intervals, points))
    }
}

/// Splits on the union keyword `u` outside brackets.
fn split_union(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == 'u' && depth == 0 {
            parts.push(core::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    parts.push(cur);
    parts
}
