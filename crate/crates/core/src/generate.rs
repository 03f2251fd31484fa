//! Seeded and exhaustive generators of formulas, theories, structures and
//! families, shared by the test suites and the workbench audits.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fo::FiniteStructure;
use crate::formula::{Formula, Theory};
use crate::value::TruthValue;

/// A random propositional formula over `atoms` of depth at most `depth`, using every connective.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => Formula::Bottom,
            1 => Formula::Top,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..8) {
        0 => Formula::strong(sub(rng), sub(rng)),
        1 | 2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        5 => Formula::not(sub(rng)),
        6 => Formula::iff(sub(rng), sub(rng)),
        _ => Formula::pow(sub(rng), rng.gen_range(2..=3)),
    }
}

/// `count` theories with 1 to `max_formulas` formulas over at most `max_atoms` of `p, q, r, ...`.
pub fn random_theories(rng: &mut ChaCha8Rng, count: usize, max_atoms: usize, max_formulas: usize, depth: u32) -> Vec<Theory> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    (0..count)
        .map(|i| {
            let atoms = &NAMES[..rng.gen_range(1..=max_atoms.min(NAMES.len()))];
            let len = rng.gen_range(1..=max_formulas);
            Theory::new(&format!("gen{i}"), (0..len).map(|_| random_formula(rng, atoms, depth)).collect())
        })
        .collect()
}

/// The first-order formulas of the Łoś and finite-exactness sweeps.
///
/// Literals are `R(x)`, `R(y)` and `0`. Level one closes them under `&`
/// and `→`; level two puts one quantifier over a level-one formula; level
/// three joins a level-two formula and a literal with `&` or `→` in either
/// order. Every formula has depth at most 3 and at most one quantifier.
pub fn single_quantifier_formulas() -> Vec<Formula> {
    let lits = vec![Formula::unary("R", "x"), Formula::unary("R", "y"), Formula::Bottom];
    let mut level1 = lits.clone();
    for a in &lits {
        for b in &lits {
            level1.push(Formula::strong(a.clone(), b.clone()));
            level1.push(Formula::implies(a.clone(), b.clone()));
        }
    }
    let mut level2 = Vec::new();
    for body in &level1 {
        if body.free_vars().contains("x") {
            level2.push(Formula::forall("x", body.clone()));
            level2.push(Formula::exists("x", body.clone()));
        }
    }
    let mut out = level1;
    for q in &level2 {
        for l in &lits[..2] {
            out.push(Formula::strong(q.clone(), l.clone()));
            out.push(Formula::implies(q.clone(), l.clone()));
            out.push(Formula::implies(l.clone(), q.clone()));
        }
    }
    out.extend(level2);
    out
}

/// Sentences with two nested quantifiers over level-one bodies in `x`, `y`.
pub fn nested_sentences() -> Vec<Formula> {
    let lits = [Formula::unary("R", "x"), Formula::unary("R", "y")];
    let mut bodies = Vec::new();
    for a in &lits {
        for b in &lits {
            if a != b {
                bodies.push(Formula::strong(a.clone(), b.clone()));
                bodies.push(Formula::implies(a.clone(), b.clone()));
            }
        }
    }
    let mut out = Vec::new();
    type Q = fn(&str, Formula) -> Formula;
    let qs: [Q; 2] = [Formula::forall, Formula::exists];
    for body in &bodies {
        for outer in qs {
            for inner in qs {
                out.push(outer("x", inner("y", body.clone())));
            }
        }
    }
    out
}

/// Every structure on `e0, e1, ...` with `1..=max_size` elements interpreting one unary `R` in `values`.
///
/// With `sorted_only`, only tables listed in nondecreasing order are kept,
/// which is one representative per isomorphism class.
pub fn unary_structures(max_size: usize, values: &[TruthValue], sorted_only: bool) -> Vec<FiniteStructure> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        for table in tuples_over(values, size) {
            if sorted_only && table.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let universe: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
            let mut m = FiniteStructure::new(universe).expect("nonempty");
            m.declare_predicate("R", 1, values[0].clone()).expect("fresh");
            for (i, v) in table.into_iter().enumerate() {
                m.set_predicate("R", &[i], v).expect("declared");
            }
            out.push(m);
        }
    }
    out
}

/// Every length-`n` sequence over `values`, the last position varying fastest.
pub fn tuples_over<T: Clone>(values: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| values.iter().map(move |v| [t.as_slice(), core::slice::from_ref(v)].concat())).collect();
    }
    out
}
