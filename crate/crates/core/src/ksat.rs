//! K-satisfiability of finite propositional theories.
//!
//! [`ksat_godel_exact`] decides Gödel instances exactly via order abstractions.
//! [`ksat_search`] scans a rational grid and is only a semi-decision for
//! Łukasiewicz and product logic. [`classical_bridge`] reduces the case
//! `1 ∈ K ⊆ (0,1]` (or its metric mirror) to two-valued satisfiability.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::formula::{Formula, Theory};
use crate::kset::{Capacity, KSet};
use crate::order::OrderAbstraction;
use crate::semantics::{evaluate, Evaluation, SemanticsMode};
use crate::value::{Rational, TruthValue};

/// Largest atom count the exact Gödel solver enumerates.
pub const EXACT_ATOM_LIMIT: usize = 8;
/// Largest atom count for two-valued enumeration.
pub const BRIDGE_ATOM_LIMIT: usize = 20;
/// Default cap on the number of grid points visited by [`ksat_search`].
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KsatStatus {
    Sat(Evaluation),
    /// Proven unsatisfiable.
    UnsatExact,
    /// No witness on the grid of the given resolution; not a proof of unsatisfiability.
    Exhausted { resolution: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsatResult {
    pub status: KsatStatus,
    /// Value of each theory formula under the witness, in theory order.
    pub certificate: Vec<(Formula, TruthValue)>,
}

impl KsatResult {
    fn unsat() -> KsatResult {
        KsatResult { status: KsatStatus::UnsatExact, certificate: Vec::new() }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self.status, KsatStatus::Sat(_))
    }

    pub fn witness(&self) -> Option<&Evaluation> {
        match &self.status {
            KsatStatus::Sat(v) => Some(v),
            _ => None,
        }
    }
}

/// Re-evaluates a candidate and packages it, refusing witnesses that miss `K`.
fn certify(sem: SemanticsMode, a: Algebra, t: &Theory, k: &KSet, v: Evaluation) -> Result<KsatResult> {
    let mut certificate = Vec::with_capacity(t.len());
    for f in &t.formulas {
        let x = evaluate(sem, a, f, &v)?;
        assert!(k.contains(&x), "witness {v} sends `{f}` to {x}, outside {k}");
        certificate.push((f.clone(), x));
    }
    Ok(KsatResult { status: KsatStatus::Sat(v), certificate })
}

fn require_propositional(t: &Theory) -> Result<()> {
    if t.is_propositional() {
        Ok(())
    } else {
        Err(Error::NotPropositional)
    }
}

/// Exact K-satisfiability for Gödel logic.
///
/// The witness is the lexicographically least (atoms in name order) among the
/// canonical witnesses of all feasible order abstractions. Metric instances
/// are solved as the standard instance with `K` reflected by `x ↦ 1-x`.
pub fn ksat_godel_exact(t: &Theory, k: &KSet, sem: SemanticsMode) -> Result<KsatResult> {
    require_propositional(t)?;
    if sem == SemanticsMode::Metric {
        let dual = ksat_godel_exact(t, &k.dual(), SemanticsMode::Standard)?;
        return match dual.status {
            KsatStatus::Sat(w) => certify(sem, Algebra::Godel, t, k, w.dual()),
            other => Ok(KsatResult { status: other, certificate: Vec::new() }),
        };
    }
    let atoms = t.atoms();
    if atoms.len() > EXACT_ATOM_LIMIT {
        return Err(Error::Budget {
            what: "exact Godel solver atoms",
            required: atoms.len() as u128,
            limit: EXACT_ATOM_LIMIT as u128,
        });
    }
    if t.is_empty() {
        let v = atoms.iter().map(|a| (a.clone(), TruthValue::one())).collect();
        return certify(sem, Algebra::Godel, t, k, v);
    }
    let mut best: Option<Vec<TruthValue>> = None;
    let mut failure: Option<Error> = None;
    OrderAbstraction::for_each(&atoms, |o| {
        if failure.is_some() {
            return;
        }
        match canonical_witness(t, k, o) {
            Ok(Some(v)) => {
                let key: Vec<TruthValue> = atoms.iter().map(|a| v.get(a).cloned().expect("total")).collect();
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match best {
        Some(values) => {
            let v = atoms.iter().cloned().zip(values).collect();
            certify(sem, Algebra::Godel, t, k, v)
        }
        None => Ok(KsatResult::unsat()),
    }
}

/// A witness for `t` realizing `o`, if one exists.
///
/// Levels that carry a formula value take the greedy increasing choice from
/// `K ∩ (0,1)`; the remaining interior levels are spaced evenly in between.
pub fn canonical_witness(t: &Theory, k: &KSet, o: &OrderAbstraction) -> Result<Option<Evaluation>> {
    let top = o.top();
    let mut required = alloc::vec![false; top + 1];
    for f in &t.formulas {
        required[o.value_level(f)?] = true;
    }
    if required[0] && !k.contains(&TruthValue::zero()) {
        return Ok(None);
    }
    if required[top] && !k.contains(&TruthValue::one()) {
        return Ok(None);
    }
    let interior: Vec<usize> = (1..top).filter(|&l| required[l]).collect();
    let Some(chosen) = k.increasing_choice(interior.len()) else {
        return Ok(None);
    };
    let mut values: Vec<Option<TruthValue>> = alloc::vec![None; top + 1];
    values[0] = Some(TruthValue::zero());
    values[top] = Some(TruthValue::one());
    for (l, x) in interior.into_iter().zip(chosen) {
        values[l] = Some(x);
    }
    let mut lo = 0;
    for hi in 1..=top {
        if values[hi].is_none() {
            continue;
        }
        let gap = hi - lo;
        if gap > 1 {
            let a = values[lo].clone().expect("anchored").into_rational();
            let b = values[hi].clone().expect("anchored").into_rational();
            for (step, slot) in values[lo + 1..hi].iter_mut().enumerate() {
                let frac = Rational::new(BigInt::from(step + 1), BigInt::from(gap));
                *slot = Some(TruthValue::new(&a + (&b - &a) * frac).expect("between anchors"));
            }
        }
        lo = hi;
    }
    let values: Vec<TruthValue> = values.into_iter().map(|x| x.expect("filled")).collect();
    Ok(Some(o.realize(&values)))
}

/// Exhaustive search over `{0, 1/n, ..., 1}^atoms` in lexicographic order.
///
/// For Gödel logic a failed grid search defers to [`ksat_godel_exact`].
pub fn ksat_search(a: Algebra, sem: SemanticsMode, t: &Theory, k: &KSet, n: u32, budget: u128) -> Result<KsatResult> {
    require_propositional(t)?;
    if n < 1 {
        return Err(Error::Precondition("grid resolution must be at least 1".into()));
    }
    if k.is_empty() && !t.is_empty() {
        return Ok(KsatResult::unsat());
    }
    let atoms = t.atoms();
    let required = (n as u128 + 1).checked_pow(atoms.len() as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget { what: "grid points", required, limit: budget });
    }
    let grid = TruthValue::grid(n);
    let mut digits = alloc::vec![0usize; atoms.len()];
    loop {
        let v: Evaluation = atoms.iter().cloned().zip(digits.iter().map(|&d| grid[d].clone())).collect();
        let mut ok = true;
        for f in &t.formulas {
            if !k.contains(&evaluate(sem, a, f, &v)?) {
                ok = false;
                break;
            }
        }
        if ok {
            return certify(sem, a, t, k, v);
        }
        if !increment(&mut digits, n as usize) {
            break;
        }
    }
    if a == Algebra::Godel {
        return ksat_godel_exact(t, k, sem);
    }
    Ok(KsatResult { status: KsatStatus::Exhausted { resolution: n }, certificate: Vec::new() })
}

/// Odometer step with the last digit fastest; false after the final state.
fn increment(digits: &mut [usize], max: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Two-valued decision for `1 ∈ K ⊆ (0,1]` (standard) or `0 ∈ K ⊆ [0,1)` (metric).
///
/// Valuations are tried with the designated value first, so the witness is the
/// first classical model in that order.
pub fn classical_bridge(a: Algebra, sem: SemanticsMode, t: &Theory, k: &KSet) -> Result<KsatResult> {
    if a == Algebra::Lukasiewicz {
        return Err(Error::Unsupported("the two-valued bridge needs Godel or product logic".into()));
    }
    require_propositional(t)?;
    let designated = sem.designated();
    let bottom = sem.bottom();
    if !k.contains(&designated) || k.contains(&bottom) {
        return Err(Error::Precondition(format!(
            "{sem} semantics needs {designated} in K and {bottom} outside K, got {k}"
        )));
    }
    let atoms = t.atoms();
    if atoms.len() > BRIDGE_ATOM_LIMIT {
        return Err(Error::Budget {
            what: "two-valued bridge atoms",
            required: atoms.len() as u128,
            limit: BRIDGE_ATOM_LIMIT as u128,
        });
    }
    let n = atoms.len();
    for mask in 0u32..(1u32 << n) {
        let v: Evaluation = atoms
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let bit = (mask >> (n - 1 - i)) & 1;
                (p.clone(), if bit == 0 { designated.clone() } else { bottom.clone() })
            })
            .collect();
        let mut model = true;
        for f in &t.formulas {
            if evaluate(sem, a, f, &v)? != designated {
                model = false;
                break;
            }
        }
        if model {
            return certify(sem, a, t, k, v);
        }
    }
    Ok(KsatResult::unsat())
}

/// `{p_i → p_j : 1 ≤ i < j ≤ n}`.
pub fn chain_theory(n: usize) -> Result<Theory> {
    if n < 2 {
        return Err(Error::Precondition(format!("chain theory needs n >= 2, got {n}")));
    }
    let p = |i: usize| Formula::atom(&format!("p{i}"));
    let mut formulas = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            formulas.push(Formula::implies(p(i), p(j)));
        }
    }
    Ok(Theory::new(&format!("chain{n}"), formulas))
}

/// Whether the chain law predicts satisfiability for this `K`.
///
/// With `1 ∈ K` the constant evaluation satisfies every chain theory, so the
/// counting condition only decides the case `K ⊆ [0,1)`.
pub fn chain_law_predicts_sat(n: usize, k: &KSet) -> bool {
    if k.contains(&TruthValue::one()) {
        return true;
    }
    match k.capacity_below_one() {
        Capacity::Infinite => true,
        Capacity::Finite(m) => n - 1 <= m,
    }
}

/// Renders a status word for reports.
pub fn status_name(s: &KsatStatus) -> String {
    match s {
        KsatStatus::Sat(_) => "sat".into(),
        KsatStatus::UnsatExact => "unsat".into(),
        KsatStatus::Exhausted { resolution } => format!("exhausted at resolution {resolution}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn theory(lines: &[&str]) -> Theory {
        Theory::new("t", lines.iter().map(|l| parse_formula(l).unwrap()).collect())
    }

    fn tv(n: i64, d: i64) -> TruthValue {
        TruthValue::ratio(n, d).unwrap()
    }

    fn k(s: &str) -> KSet {
        s.parse().unwrap()
    }

    #[test]
    fn chain_three_witness() {
        let t = chain_theory(3).unwrap();
        let r = ksat_godel_exact(&t, &k("{1/4,1/2}"), SemanticsMode::Standard).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.get("p1"), Some(&tv(3, 4)));
        assert_eq!(w.get("p2"), Some(&tv(1, 2)));
        assert_eq!(w.get("p3"), Some(&tv(1, 4)));
        assert_eq!(r.certificate.len(), 3);
    }

    #[test]
    fn chain_four_is_unsat() {
        let t = chain_theory(4).unwrap();
        let r = ksat_godel_exact(&t, &k("{1/4,1/2}"), SemanticsMode::Standard).unwrap();
        assert_eq!(r.status, KsatStatus::UnsatExact);
    }

    #[test]
    fn classical_contradiction() {
        let r = ksat_godel_exact(&theory(&["p", "~p"]), &k("{1}"), SemanticsMode::Standard).unwrap();
        assert_eq!(r.status, KsatStatus::UnsatExact);
    }

    #[test]
    fn metric_exact_uses_reflection() {
        let t = chain_theory(3).unwrap();
        let r = ksat_godel_exact(&t, &k("{3/4,1/2}"), SemanticsMode::Metric).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.get("p1"), Some(&tv(1, 4)));
        assert!(r.certificate.iter().all(|(_, x)| *x == tv(1, 2) || *x == tv(3, 4)));
    }

    #[test]
    fn grid_search_examples() {
        let r = ksat_search(Algebra::Lukasiewicz, SemanticsMode::Standard, &theory(&["p <-> ~p"]), &k("{1}"), 4, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        assert_eq!(r.witness().unwrap().get("p"), Some(&tv(1, 2)));
        let r = ksat_search(Algebra::Product, SemanticsMode::Standard, &theory(&["p & p"]), &k("{1/4}"), 4, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        assert_eq!(r.witness().unwrap().get("p"), Some(&tv(1, 2)));
        for a in Algebra::ALL {
            let r = ksat_search(a, SemanticsMode::Standard, &theory(&["p"]), &k("{}"), 4, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(!r.is_sat());
        }
        let r = ksat_search(Algebra::Product, SemanticsMode::Standard, &theory(&["p & p"]), &k("{1/3}"), 4, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        assert_eq!(r.status, KsatStatus::Exhausted { resolution: 4 });
        let big = theory(&["a & b & c & d"]);
        assert!(matches!(
            ksat_search(Algebra::Product, SemanticsMode::Standard, &big, &k("{1}"), 100, 1000),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn godel_grid_miss_defers_to_exact() {
        let r = ksat_search(Algebra::Godel, SemanticsMode::Standard, &theory(&["p"]), &k("{1/3}"), 4, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        assert_eq!(r.witness().unwrap().get("p"), Some(&tv(1, 3)));
    }

    #[test]
    fn bridge_examples() {
        let pos = k("(0,1]");
        let r = classical_bridge(Algebra::Godel, SemanticsMode::Standard, &theory(&["p -> q", "q -> p"]), &pos).unwrap();
        let w = r.witness().unwrap();
        assert_eq!((w.get("p"), w.get("q")), (Some(&TruthValue::one()), Some(&TruthValue::one())));
        for a in [Algebra::Godel, Algebra::Product] {
            let r = classical_bridge(a, SemanticsMode::Standard, &theory(&["p", "~p"]), &pos).unwrap();
            assert_eq!(r.status, KsatStatus::UnsatExact);
        }
        let r = classical_bridge(Algebra::Product, SemanticsMode::Standard, &theory(&["~~p", "~p"]), &pos).unwrap();
        assert_eq!(r.status, KsatStatus::UnsatExact);
        assert!(classical_bridge(Algebra::Godel, SemanticsMode::Standard, &theory(&["p"]), &k("[0,1]")).is_err());
        assert!(classical_bridge(Algebra::Lukasiewicz, SemanticsMode::Standard, &theory(&["p"]), &pos).is_err());
        let r = classical_bridge(Algebra::Godel, SemanticsMode::Metric, &theory(&["p -> q"]), &k("[0,1)")).unwrap();
        assert_eq!(r.witness().unwrap().get("p"), Some(&TruthValue::zero()));
    }

    #[test]
    fn chain_theory_sizes() {
        assert_eq!(chain_theory(2).unwrap().formulas, [parse_formula("p1 -> p2").unwrap()]);
        assert_eq!(chain_theory(3).unwrap().len(), 3);
        assert_eq!(chain_theory(4).unwrap().len(), 6);
        assert!(chain_theory(1).is_err());
    }
}
