//! Order abstractions: the finitely many ways atoms can sit relative to each
//! other and to 0 and 1, which is all that Gödel standard semantics observes.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::semantics::Evaluation;
use crate::value::TruthValue;

/// An ordered partition of atoms into levels `L0 < L1 < ... < Lm`.
///
/// `L0` is the class of 0 and `Lm` the class of 1; both may hold no atoms.
/// Interior levels are nonempty. There are always at least two levels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderAbstraction {
    levels: Vec<Vec<String>>,
    index: BTreeMap<String, usize>,
}

/// A value in `atoms ∪ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolicValue {
    Zero,
    One,
    /// The least-named atom of an interior level.
    Atom(String),
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicValue::Zero => f.write_str("0"),
            SymbolicValue::One => f.write_str("1"),
            SymbolicValue::Atom(a) => f.write_str(a),
        }
    }
}

impl OrderAbstraction {
    /// Builds an abstraction from levels bottom to top; the first is the class
    /// of 0 and the last the class of 1.
    pub fn new(levels: Vec<Vec<String>>) -> Result<OrderAbstraction> {
        if levels.len() < 2 {
            return Err(Error::Precondition("an order abstraction needs the levels of 0 and 1".into()));
        }
        let last = levels.len() - 1;
        let mut index = BTreeMap::new();
        let mut levels = levels;
        for (i, level) in levels.iter_mut().enumerate() {
            if level.is_empty() && i != 0 && i != last {
                return Err(Error::Precondition("interior levels must be nonempty".into()));
            }
            level.sort();
            for a in level.iter() {
                if index.insert(a.clone(), i).is_some() {
                    return Err(Error::Precondition(alloc::format!("atom `{a}` occurs in two levels")));
                }
            }
        }
        Ok(OrderAbstraction { levels, index })
    }

    /// The abstraction realized by a concrete evaluation.
    pub fn from_evaluation(v: &Evaluation) -> OrderAbstraction {
        let mut by_value: BTreeMap<TruthValue, Vec<String>> = BTreeMap::new();
        by_value.entry(TruthValue::zero()).or_default();
        by_value.entry(TruthValue::one()).or_default();
        for (a, x) in v.iter() {
            by_value.entry(x.clone()).or_default().push(a.clone());
        }
        OrderAbstraction::new(by_value.into_values().collect()).expect("distinct values give valid levels")
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    /// Index of the level of 1.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_of(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn symbol(&self, level: usize) -> SymbolicValue {
        if level == 0 {
            SymbolicValue::Zero
        } else if level == self.top() {
            SymbolicValue::One
        } else {
            SymbolicValue::Atom(self.levels[level][0].clone())
        }
    }

    /// True when `v` orders the atoms exactly as this abstraction does.
    pub fn is_consistent_with(&self, v: &Evaluation) -> bool {
        v.len() == self.index.len() && OrderAbstraction::from_evaluation(v) == *self
    }

    /// Assigns each level its value from `level_values` (which must start at 0
    /// and end at 1).
    pub fn realize(&self, level_values: &[TruthValue]) -> Evaluation {
        debug_assert_eq!(level_values.len(), self.levels.len());
        let mut v = Evaluation::new();
        for (level, atoms) in self.levels.iter().enumerate() {
            for a in atoms {
                v.insert(a, level_values[level].clone());
            }
        }
        v
    }

    /// Level of the Gödel standard value of `f` under this abstraction.
    pub fn value_level(&self, f: &Formula) -> Result<usize> {
        use Formula::*;
        let top = self.top();
        let atom = |p: &String| self.level_of(p).ok_or_else(|| Error::MissingAssignment(p.clone()));
        Ok(match f {
            Atom(p) => atom(p)?,
            Pred(p, args) if args.is_empty() => atom(p)?,
            Pred(..) | Forall(..) | Exists(..) => return Err(Error::NotPropositional),
            Bottom => 0,
            Top => top,
            Strong(x, y) | And(x, y) => self.value_level(x)?.min(self.value_level(y)?),
            Or(x, y) => self.value_level(x)?.max(self.value_level(y)?),
            Implies(x, y) => implies(self.value_level(x)?, self.value_level(y)?, top),
            Iff(x, y) => {
                let (a, b) = (self.value_level(x)?, self.value_level(y)?);
                implies(a, b, top).min(implies(b, a, top))
            }
            Not(x) => implies(self.value_level(x)?, 0, top),
            StrongPow(x, _) => self.value_level(x)?,
        })
    }

    /// Calls `visit` on every abstraction of the given atoms.
    pub fn for_each(atoms: &[String], mut visit: impl FnMut(&OrderAbstraction)) {
        let n = atoms.len();
        if n == 0 {
            visit(&OrderAbstraction::new(vec![Vec::new(), Vec::new()]).expect("two levels"));
            return;
        }
        // Set partitions as restricted growth strings, then every order of their blocks.
        let mut rgs = vec![0usize; n];
        loop {
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            let mut perm: Vec<usize> = (0..blocks).collect();
            loop {
                let mut ordered: Vec<Vec<String>> = vec![Vec::new(); blocks];
                for (i, &b) in rgs.iter().enumerate() {
                    ordered[perm[b]].push(atoms[i].clone());
                }
                for merge_zero in [false, true] {
                    for merge_one in [false, true] {
                        if blocks == 1 && merge_zero && merge_one {
                            continue;
                        }
                        let mut levels = Vec::with_capacity(blocks + 2);
                        let mut rest = ordered.clone();
                        let top_class = if merge_one { rest.pop().expect("nonempty") } else { Vec::new() };
                        if merge_zero {
                            levels.append(&mut rest);
                        } else {
                            levels.push(Vec::new());
                            levels.append(&mut rest);
                        }
                        levels.push(top_class);
                        visit(&OrderAbstraction::new(levels).expect("generated levels are valid"));
                    }
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            if !next_rgs(&mut rgs) {
                break;
            }
        }
    }
}

fn implies(x: usize, y: usize, top: usize) -> usize {
    if x <= y {
        top
    } else {
        y
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn next_rgs(a: &mut [usize]) -> bool {
    for i in (1..a.len()).rev() {
        let max_prefix = a[..i].iter().copied().max().unwrap_or(0);
        if a[i] <= max_prefix {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

impl fmt::Display for OrderAbstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, level) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            let mut members: Vec<&str> = level.iter().map(String::as_str).collect();
            if i == 0 {
                members.insert(0, "0");
            }
            if i == self.top() {
                members.push("1");
            }
            f.write_str(&members.join(" = "))?;
        }
        f.write_str("]")
    }
}

/// Symbolic Gödel standard value of `f` under `o`.
pub fn order_abstract_value(f: &Formula, o: &OrderAbstraction) -> Result<SymbolicValue> {
    Ok(o.symbol(o.value_level(f)?))
}
