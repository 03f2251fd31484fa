//! Exact first-order values over ω-indexed structures whose unary predicates
//! are catalog sequences.
//!
//! Each quantifier block splits into a finite prefix, evaluated term by term,
//! and a tail on which the relative order of every predicate (and of 0 and 1)
//! is fixed. On the tail the matrix is a closed-form expression whose infimum
//! or supremum follows from monotonicity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::order::OrderAbstraction;
use crate::poly::RatFn;
use crate::semantics::{evaluate, Connectives, Evaluation, SemanticsMode};
use crate::sequence::SequenceExpr;
use crate::value::{Rational, TruthValue};

/// Default number of leading elements always evaluated explicitly.
pub const DEFAULT_KMAX: u64 = 64;
/// Longest prefix evaluated before giving up.
pub const PREFIX_CAP: u64 = 20_000;

/// Universe `{a_1, a_2, ...}` with unary predicates `P(a_k) = s_P(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaStructure {
    predicates: BTreeMap<String, SequenceExpr>,
    pub kmax: u64,
}

impl Default for OmegaStructure {
    fn default() -> Self {
        OmegaStructure { predicates: BTreeMap::new(), kmax: DEFAULT_KMAX }
    }
}

impl OmegaStructure {
    pub fn new() -> OmegaStructure {
        OmegaStructure::default()
    }

    pub fn with_kmax(mut self, kmax: u64) -> OmegaStructure {
        self.kmax = kmax.max(1);
        self
    }

    pub fn insert(&mut self, name: &str, s: SequenceExpr) -> Option<SequenceExpr> {
        self.predicates.insert(name.into(), s)
    }

    pub fn get(&self, name: &str) -> Option<&SequenceExpr> {
        self.predicates.get(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&String, &SequenceExpr)> {
        self.predicates.iter()
    }

    /// Predicate values at `a_k`.
    pub fn slice(&self, k: u64) -> Evaluation {
        self.predicates.iter().map(|(n, s)| (n.clone(), s.value_at(k))).collect()
    }
}

/// Value of a sentence in Gödel or product standard semantics.
///
/// The sentence may combine any number of quantifier blocks with connectives,
/// but each block must be a single `∀x` or `∃x` over a quantifier-free matrix
/// whose predicates are all applied to `x`.
pub fn omega_interpret(a: Algebra, s: &OmegaStructure, sentence: &Formula) -> Result<TruthValue> {
    if a == Algebra::Lukasiewicz {
        return Err(Error::Unsupported("omega structures support Godel and product logic only".into()));
    }
    let c = Connectives::new(SemanticsMode::Standard, a);
    outer(&c, s, sentence)
}

fn outer(c: &Connectives, s: &OmegaStructure, f: &Formula) -> Result<TruthValue> {
    use Formula::*;
    Ok(match f {
        Bottom => c.bottom(),
        Top => c.top(),
        Atom(p) | Pred(p, _) => {
            return Err(Error::Unsupported(format!("`{p}` occurs outside a quantifier block")));
        }
        Strong(x, y) => c.strong(&outer(c, s, x)?, &outer(c, s, y)?),
        Implies(x, y) => c.implies(&outer(c, s, x)?, &outer(c, s, y)?),
        And(x, y) => c.and(&outer(c, s, x)?, &outer(c, s, y)?),
        Or(x, y) => c.or(&outer(c, s, x)?, &outer(c, s, y)?),
        Iff(x, y) => c.iff(&outer(c, s, x)?, &outer(c, s, y)?),
        Not(x) => c.not(&outer(c, s, x)?),
        StrongPow(x, n) => c.pow(&outer(c, s, x)?, *n),
        Forall(v, body) => block(c, s, v, body, true)?,
        Exists(v, body) => block(c, s, v, body, false)?,
    })
}

/// Replaces `P(x)` by the atom `P`, rejecting anything outside the supported shape.
fn matrix(body: &Formula, var: &str, s: &OmegaStructure) -> Result<Formula> {
    use Formula::*;
    let rec = |x: &Formula| matrix(x, var, s).map(alloc::boxed::Box::new);
    Ok(match body {
        Bottom => Bottom,
        Top => Top,
        Pred(p, args) => {
            match args.as_slice() {
                [Term::Var(x)] if x == var => {}
                [Term::Var(x)] => return Err(Error::UnboundVariable(x.clone())),
                _ => return Err(Error::Unsupported(format!("`{p}` must be applied to the bound variable only"))),
            }
            if s.get(p).is_none() {
                return Err(Error::UnknownSymbol(p.clone()));
            }
            Atom(p.clone())
        }
        Atom(p) => return Err(Error::Unsupported(format!("nullary symbol `{p}` in an omega structure"))),
        Forall(..) | Exists(..) => {
            return Err(Error::Unsupported("nested quantifiers in an omega sentence".into()));
        }
        Strong(x, y) => Strong(rec(x)?, rec(y)?),
        Implies(x, y) => Implies(rec(x)?, rec(y)?),
        And(x, y) => And(rec(x)?, rec(y)?),
        Or(x, y) => Or(rec(x)?, rec(y)?),
        Iff(x, y) => Iff(rec(x)?, rec(y)?),
        Not(x) => Not(rec(x)?),
        StrongPow(x, n) => StrongPow(rec(x)?, *n),
    })
}

fn block(c: &Connectives, s: &OmegaStructure, var: &str, body: &Formula, universal: bool) -> Result<TruthValue> {
    let m = matrix(body, var, s)?;
    let (tail_from, tail) = match c.algebra {
        Algebra::Godel => godel_tail(s, &m, universal)?,
        Algebra::Product => product_tail(s, &m, universal)?,
        Algebra::Lukasiewicz => unreachable!("rejected at entry"),
    };
    if tail_from - 1 > PREFIX_CAP {
        return Err(Error::Budget { what: "omega prefix length", required: tail_from as u128 - 1, limit: PREFIX_CAP as u128 });
    }
    let atoms = m.atoms();
    let mut acc = tail;
    for k in 1..tail_from {
        let v: Evaluation = atoms.iter().map(|p| (p.clone(), s.get(p).expect("checked").value_at(k))).collect();
        let x = evaluate(c.mode, c.algebra, &m, &v)?;
        acc = if universal { c.and(&acc, &x) } else { c.or(&acc, &x) };
    }
    Ok(acc)
}

/// Start of the tail and the infimum (or supremum) of the matrix over it.
fn godel_tail(s: &OmegaStructure, m: &Formula, universal: bool) -> Result<(u64, TruthValue)> {
    let atoms: Vec<String> = m.atoms().into_iter().collect();
    let seqs: Vec<&SequenceExpr> = atoms.iter().map(|p| s.get(p).expect("checked")).collect();
    let zero = SequenceExpr::constant(TruthValue::zero());
    let one = SequenceExpr::constant(TruthValue::one());
    let mut threshold = s.kmax + 1;
    let mut bump = |(o, n): (Ordering, u64)| {
        threshold = threshold.max(n);
        o
    };
    let mut at_zero = Vec::new();
    let mut at_one = Vec::new();
    let mut inner: Vec<usize> = Vec::new();
    for (i, q) in seqs.iter().enumerate() {
        if bump(q.eventual_cmp(&zero)?) == Ordering::Equal {
            at_zero.push(atoms[i].clone());
        } else if bump(q.eventual_cmp(&one)?) == Ordering::Equal {
            at_one.push(atoms[i].clone());
        } else {
            inner.push(i);
        }
    }
    let mut order = BTreeMap::new();
    for &i in &inner {
        for &j in &inner {
            order.insert((i, j), bump(seqs[i].eventual_cmp(seqs[j])?));
        }
    }
    inner.sort_by(|i, j| order[&(*i, *j)]);
    let mut levels: Vec<Vec<String>> = alloc::vec![at_zero];
    let mut prev: Option<usize> = None;
    for &i in &inner {
        match prev {
            Some(p) if order[&(p, i)] == Ordering::Equal => levels.last_mut().expect("nonempty").push(atoms[i].clone()),
            _ => levels.push(alloc::vec![atoms[i].clone()]),
        }
        prev = Some(i);
    }
    levels.push(at_one);
    let o = OrderAbstraction::new(levels)?;
    let level = o.value_level(m)?;
    let value = if level == 0 {
        TruthValue::zero()
    } else if level == o.top() {
        TruthValue::one()
    } else {
        let q = s.get(&o.levels()[level][0]).expect("checked");
        if universal {
            q.inf_from(threshold)
        } else {
            q.sup_from(threshold)
        }
    };
    Ok((threshold, value))
}

struct Symbolic {
    threshold: u64,
}

impl Symbolic {
    fn bump(&mut self, n: u64) {
        self.threshold = self.threshold.max(n);
    }
}

fn product_tail(s: &OmegaStructure, m: &Formula, universal: bool) -> Result<(u64, TruthValue)> {
    let mut st = Symbolic { threshold: s.kmax + 1 };
    let r = product_expr(s, m, &mut st)?;
    let (den_sign, n) = r.den.eventual_sign();
    st.bump(n);
    if den_sign != Ordering::Greater {
        return Err(Error::Unsupported("tail expression has a vanishing denominator".into()));
    }
    let (mono, n) = r.monotonicity();
    st.bump(n);
    let from = st.threshold;
    let at_start = r.eval(&Rational::from_integer(BigInt::from(from)));
    let limit = r.limit().ok_or_else(|| Error::Unsupported("unbounded tail expression".into()))?;
    let value = match (mono, universal) {
        (Ordering::Less, true) | (Ordering::Greater, false) => limit,
        _ => at_start,
    };
    Ok((from, TruthValue::new(value)?))
}

fn product_expr(s: &OmegaStructure, f: &Formula, st: &mut Symbolic) -> Result<RatFn> {
    use Formula::*;
    let zero = RatFn::constant(Rational::zero());
    let one = RatFn::constant(Rational::from_integer(1.into()));
    Ok(match f {
        Bottom => zero,
        Top => one,
        Atom(p) => {
            let q = s.get(p).expect("checked");
            let (num, den) = q.as_fraction().ok_or_else(|| {
                Error::Unsupported(format!("geometric predicate `{p}` under product logic"))
            })?;
            RatFn { num, den }
        }
        Strong(x, y) => product_expr(s, x, st)?.mul(&product_expr(s, y, st)?),
        StrongPow(x, n) => {
            let base = product_expr(s, x, st)?;
            let mut acc = base.clone();
            for _ in 1..*n {
                acc = acc.mul(&base);
            }
            acc
        }
        Implies(x, y) => {
            let (x, y) = (product_expr(s, x, st)?, product_expr(s, y, st)?);
            product_implies(&x, &y, st)
        }
        Not(x) => {
            let x = product_expr(s, x, st)?;
            product_implies(&x, &zero, st)
        }
        Iff(x, y) => {
            let (x, y) = (product_expr(s, x, st)?, product_expr(s, y, st)?);
            product_implies(&x, &y, st).mul(&product_implies(&y, &x, st))
        }
        And(x, y) | Or(x, y) => {
            let (l, r) = (product_expr(s, x, st)?, product_expr(s, y, st)?);
            let (o, n) = l.compare(&r);
            st.bump(n);
            let take_left = match f {
                And(..) => o != Ordering::Greater,
                _ => o != Ordering::Less,
            };
            if take_left {
                l
            } else {
                r
            }
        }
        Pred(..) | Forall(..) | Exists(..) => unreachable!("matrix is propositional"),
    })
}

fn product_implies(x: &RatFn, y: &RatFn, st: &mut Symbolic) -> RatFn {
    let (o, n) = x.compare(y);
    st.bump(n);
    if o != Ordering::Greater {
        return RatFn::constant(Rational::from_integer(1.into()));
    }
    let (sign, n) = x.num.eventual_sign();
    st.bump(n);
    debug_assert!(!x.num.is_zero());
    y.div(x, sign)
}

/// The block's value over the finite prefix `a_1, ..., a_k` only.
pub fn truncated_block_value(a: Algebra, s: &OmegaStructure, var: &str, body: &Formula, universal: bool, k: u64) -> Result<TruthValue> {
    let m = matrix(body, var, s)?;
    let c = Connectives::new(SemanticsMode::Standard, a);
    let atoms = m.atoms();
    let mut acc = if universal { c.top() } else { c.bottom() };
    for i in 1..=k {
        let v: Evaluation = atoms.iter().map(|p| (p.clone(), s.get(p).expect("checked").value_at(i))).collect();
        let x = evaluate(c.mode, a, &m, &v)?;
        acc = if universal { c.and(&acc, &x) } else { c.or(&acc, &x) };
    }
    Ok(acc)
}
