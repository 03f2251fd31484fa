//! Reference implementations used as oracles by the integration and acceptance tests.
//!
//! Everything here is written directly from the definitions, without calling
//! the solver or interpreter under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use tnorm_core::fo::FiniteStructure;
use tnorm_core::{Algebra, Formula, KSet, Rational, SemanticsMode, Term, Theory, TruthValue};

pub fn tv(n: i64, d: i64) -> TruthValue {
    TruthValue::ratio(n, d).unwrap()
}

fn r(x: &TruthValue) -> Rational {
    x.as_rational().clone()
}

fn out(x: Rational) -> TruthValue {
    TruthValue::new(x).unwrap()
}

/// Closed forms of the three t-norms, their conorms and residua, straight from the textbook formulas.
pub fn oracle_tnorm(a: Algebra, x: &TruthValue, y: &TruthValue) -> TruthValue {
    let (x, y) = (r(x), r(y));
    out(match a {
        Algebra::Lukasiewicz => (&x + &y - Rational::one()).max(Rational::zero()),
        Algebra::Godel => x.min(y),
        Algebra::Product => x * y,
    })
}

pub fn oracle_residuum(a: Algebra, x: &TruthValue, y: &TruthValue) -> TruthValue {
    let (x, y) = (r(x), r(y));
    out(match a {
        Algebra::Lukasiewicz => (Rational::one() - &x + &y).min(Rational::one()),
        Algebra::Godel if x <= y => Rational::one(),
        Algebra::Godel => y,
        Algebra::Product if x <= y => Rational::one(),
        Algebra::Product => y / x,
    })
}

pub fn oracle_tconorm(a: Algebra, x: &TruthValue, y: &TruthValue) -> TruthValue {
    let (x, y) = (r(x), r(y));
    out(match a {
        Algebra::Lukasiewicz => (&x + &y).min(Rational::one()),
        Algebra::Godel => x.max(y),
        Algebra::Product => &x + &y - &x * &y,
    })
}

pub fn oracle_coresiduum(a: Algebra, x: &TruthValue, y: &TruthValue) -> TruthValue {
    let (x, y) = (r(x), r(y));
    out(match a {
        Algebra::Lukasiewicz => (&y - &x).max(Rational::zero()),
        Algebra::Godel if x >= y => Rational::zero(),
        Algebra::Godel => y,
        Algebra::Product if x >= y => Rational::zero(),
        Algebra::Product => (&y - &x) / (Rational::one() - &x),
    })
}

/// The two-place operations of a semantics, with `⊥`, `∧` and `∨`.
pub struct Ops {
    pub sem: SemanticsMode,
    pub a: Algebra,
}

impl Ops {
    pub fn bottom(&self) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => TruthValue::zero(),
            SemanticsMode::Metric => TruthValue::one(),
        }
    }
    pub fn top(&self) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => TruthValue::one(),
            SemanticsMode::Metric => TruthValue::zero(),
        }
    }
    pub fn strong(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => oracle_tnorm(self.a, x, y),
            SemanticsMode::Metric => oracle_tconorm(self.a, x, y),
        }
    }
    pub fn implies(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => oracle_residuum(self.a, x, y),
            SemanticsMode::Metric => oracle_coresiduum(self.a, x, y),
        }
    }
    /// Lattice meet in the truth order: min for standard, max for metric.
    pub fn meet(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => x.min(y).clone(),
            SemanticsMode::Metric => x.max(y).clone(),
        }
    }
    pub fn join(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.sem {
            SemanticsMode::Standard => x.max(y).clone(),
            SemanticsMode::Metric => x.min(y).clone(),
        }
    }
}

/// Propositional and first-order evaluation by explicit case analysis.
///
/// Quantifiers collect every instance first and then take the min or max of
/// the collected list.
pub fn oracle_eval(ops: &Ops, m: Option<&FiniteStructure>, f: &Formula, v: &BTreeMap<String, TruthValue>, env: &BTreeMap<String, usize>) -> TruthValue {
    use Formula::*;
    let go = |g: &Formula| oracle_eval(ops, m, g, v, env);
    match f {
        Atom(p) => match m {
            Some(s) => s.predicate_value(p, &[]).unwrap().clone(),
            None => v[p].clone(),
        },
        Pred(p, args) => {
            let s = m.expect("structure");
            let elems: Vec<usize> = args.iter().map(|t| term(s, t, env)).collect();
            s.predicate_value(p, &elems).unwrap().clone()
        }
        Bottom => ops.bottom(),
        Top => ops.top(),
        Strong(x, y) => ops.strong(&go(x), &go(y)),
        Implies(x, y) => ops.implies(&go(x), &go(y)),
        And(x, y) => ops.meet(&go(x), &go(y)),
        Or(x, y) => ops.join(&go(x), &go(y)),
        Not(x) => ops.implies(&go(x), &ops.bottom()),
        Iff(x, y) => {
            let (a, b) = (go(x), go(y));
            ops.strong(&ops.implies(&a, &b), &ops.implies(&b, &a))
        }
        StrongPow(x, n) => {
            let b = go(x);
            (1..*n).fold(b.clone(), |acc, _| ops.strong(&acc, &b))
        }
        Forall(var, body) | Exists(var, body) => {
            let s = m.expect("structure");
            let values: Vec<TruthValue> = (0..s.size())
                .map(|e| {
                    let mut env2 = env.clone();
                    env2.insert(var.clone(), e);
                    oracle_eval(ops, m, body, v, &env2)
                })
                .collect();
            let inf = values.iter().min().unwrap().clone();
            let sup = values.iter().max().unwrap().clone();
            // ∀ is inf in standard order and sup in metric order; ∃ the other way.
            let universal = matches!(f, Forall(..));
            if universal == (ops.sem == SemanticsMode::Standard) {
                inf
            } else {
                sup
            }
        }
    }
}

fn term(s: &FiniteStructure, t: &Term, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(x) => match env.get(x) {
            Some(e) => *e,
            None => s.function_value(x, &[]).unwrap(),
        },
        Term::Const(c) => s.function_value(c, &[]).unwrap(),
        Term::App(g, args) => {
            let elems: Vec<usize> = args.iter().map(|a| term(s, a, env)).collect();
            s.function_value(g, &elems).unwrap()
        }
    }
}

pub fn prop_eval(sem: SemanticsMode, a: Algebra, f: &Formula, v: &BTreeMap<String, TruthValue>) -> TruthValue {
    oracle_eval(&Ops { sem, a }, None, f, v, &BTreeMap::new())
}

/// Gödel value of `f` when atoms take the integer levels in `rank`, with `0`
/// at level 0 and `1` at level `top`. Only the order of values matters in
/// Gödel logic, so levels can stand in for values.
pub fn godel_level(sem: SemanticsMode, f: &Formula, rank: &BTreeMap<String, usize>, top: usize) -> usize {
    use Formula::*;
    let go = |g: &Formula| godel_level(sem, g, rank, top);
    let std = sem == SemanticsMode::Standard;
    let imp = |x: usize, y: usize| match (std, x <= y, x >= y) {
        (true, true, _) => top,
        (true, false, _) => y,
        (false, _, true) => 0,
        (false, _, false) => y,
    };
    let bottom = if std { 0 } else { top };
    let meet = |x: usize, y: usize| if std { x.min(y) } else { x.max(y) };
    let join = |x: usize, y: usize| if std { x.max(y) } else { x.min(y) };
    match f {
        Atom(p) => rank[p],
        Bottom => bottom,
        Top => top - bottom,
        Strong(x, y) | And(x, y) => meet(go(x), go(y)),
        Or(x, y) => join(go(x), go(y)),
        Implies(x, y) => imp(go(x), go(y)),
        Not(x) => imp(go(x), bottom),
        Iff(x, y) => {
            let (a, b) = (go(x), go(y));
            meet(imp(a, b), imp(b, a))
        }
        StrongPow(x, _) => go(x),
        Pred(..) | Forall(..) | Exists(..) => panic!("propositional only"),
    }
}

/// How many distinct values `K` offers strictly between 0 and 1.
pub fn interior_capacity(k: &KSet) -> Option<usize> {
    let (zero, one) = (TruthValue::zero(), TruthValue::one());
    if k.intervals().iter().any(|iv| iv.lo < iv.hi && iv.hi > zero && iv.lo < one) {
        return None;
    }
    Some(k.isolated_points().iter().filter(|p| **p > zero && **p < one).count())
}

/// Gödel K-satisfiability by enumerating every map from atoms onto levels.
///
/// A level map is feasible when the formulas landing on level 0 need `0 ∈ K`,
/// those on the top level need `1 ∈ K`, and the distinct interior levels hit
/// by formulas number at most the interior capacity of `K`.
pub fn godel_ksat_oracle(t: &Theory, k: &KSet, sem: SemanticsMode) -> bool {
    let atoms = t.atoms();
    let n = atoms.len();
    let cap = interior_capacity(k);
    let (zero_in, one_in) = (k.contains(&TruthValue::zero()), k.contains(&TruthValue::one()));
    for interior in 0..=n {
        let top = interior + 1;
        let base = top + 1;
        for mut code in 0..base.pow(n as u32) {
            let mut digits = vec![0usize; n];
            for d in digits.iter_mut().rev() {
                *d = code % base;
                code /= base;
            }
            let used: BTreeSet<usize> = digits.iter().copied().filter(|&d| d >= 1 && d <= interior).collect();
            if used.len() != interior {
                continue;
            }
            let rank: BTreeMap<String, usize> = atoms.iter().cloned().zip(digits).collect();
            let levels: Vec<usize> = t.formulas.iter().map(|f| godel_level(sem, f, &rank, top)).collect();
            let hit: BTreeSet<usize> = levels.iter().copied().filter(|&l| l != 0 && l != top).collect();
            let ok = (!levels.contains(&0) || zero_in) && (!levels.contains(&top) || one_in) && cap.is_none_or(|c| hit.len() <= c);
            if ok {
                return true;
            }
        }
    }
    false
}

/// First grid evaluation at resolution `n` putting every formula of `t` into `K`.
pub fn grid_search(sem: SemanticsMode, a: Algebra, t: &Theory, k: &KSet, n: u32) -> Option<BTreeMap<String, TruthValue>> {
    let atoms = t.atoms();
    let grid = TruthValue::grid(n);
    let total = grid.len().pow(atoms.len() as u32);
    for mut idx in 0..total {
        let mut v = BTreeMap::new();
        for p in atoms.iter().rev() {
            v.insert(p.clone(), grid[idx % grid.len()].clone());
            idx /= grid.len();
        }
        if t.formulas.iter().all(|f| k.contains(&prop_eval(sem, a, f, &v))) {
            return Some(v);
        }
    }
    None
}

/// Classical satisfiability of `t` by truth tables.
pub fn classical_sat(t: &Theory) -> bool {
    let atoms = t.atoms();
    (0..1u32 << atoms.len()).any(|bits| {
        let v: BTreeMap<String, TruthValue> = atoms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), if bits >> i & 1 == 1 { TruthValue::one() } else { TruthValue::zero() }))
            .collect();
        t.formulas.iter().all(|f| prop_eval(SemanticsMode::Standard, Algebra::Godel, f, &v).is_one())
    })
}
