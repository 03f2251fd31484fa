//! Truncations of the two first-order example theories, the ω-structure that
//! finitely satisfies the Gödel one, and exhaustive small-model search.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::fo::{interpret_indexed, FiniteStructure};
use crate::formula::{Formula, Theory};
use crate::omega::OmegaStructure;
use crate::semantics::SemanticsMode;
use crate::sequence::SequenceExpr;
use crate::value::{Rational, TruthValue};

fn x(pred: &str) -> Formula {
    Formula::unary(pred, "x")
}

fn rho(j: usize) -> String {
    format!("rho{j}")
}

/// `{¬∀x R, ∀x((R → ρ₁) → R)} ∪ {∀x((ρ_j → ρ_i) → ρ_j) : n ≥ i > j ≥ 1}`.
pub fn godelf_theory(n: usize) -> Result<Theory> {
    if n == 0 {
        return Err(Error::Precondition("the truncation needs n >= 1".into()));
    }
    let mut fs = vec![
        Formula::not(Formula::forall("x", x("R"))),
        Formula::forall("x", Formula::implies(Formula::implies(x("R"), x(&rho(1))), x("R"))),
    ];
    for i in 1..=n {
        for j in 1..i {
            let inner = Formula::implies(x(&rho(j)), x(&rho(i)));
            fs.push(Formula::forall("x", Formula::implies(inner, x(&rho(j)))));
        }
    }
    Ok(Theory::new(&format!("godelf{n}"), fs))
}

/// `{¬∀x(R ∨ ρ), ¬¬∀x R} ∪ {∀x(R → ρ^m) : 1 ≤ m ≤ n}`.
pub fn prodf_theory(n: usize) -> Result<Theory> {
    if n == 0 {
        return Err(Error::Precondition("the truncation needs n >= 1".into()));
    }
    let mut fs = vec![
        Formula::not(Formula::forall("x", Formula::or(x("R"), x("rho")))),
        Formula::not(Formula::not(Formula::forall("x", x("R")))),
    ];
    for m in 1..=n as u32 {
        fs.push(Formula::forall("x", Formula::implies(x("R"), Formula::pow(x("rho"), m))));
    }
    Ok(Theory::new(&format!("prodf{n}"), fs))
}

/// `R(a_k) = 1/k` and `ρ_j(a_k) = (n+1−j) / ((n+2) k)`.
pub fn godelf_witness(n: usize) -> Result<OmegaStructure> {
    if n == 0 {
        return Err(Error::Precondition("the truncation needs n >= 1".into()));
    }
    let mut s = OmegaStructure::new();
    s.insert("R", SequenceExpr::harmonic(Rational::from_integer(1.into()), Rational::from_integer(0.into()))?);
    for j in 1..=n {
        let c = Rational::new(((n + 1 - j) as i64).into(), ((n + 2) as i64).into());
        s.insert(&rho(j), SequenceExpr::harmonic(c, Rational::from_integer(0.into()))?);
    }
    Ok(s)
}

/// Candidate ω-models for the product example, by name.
pub fn prodf_candidates() -> Vec<(String, OmegaStructure)> {
    let table: [(&str, &str, &str); 4] = [
        ("harmonic pair", "0 + 1 * inv(k+0)", "0 + 1 * inv(k+0)"),
        ("constant halves", "1/2", "1/2"),
        ("bounded R", "1/2 + 1/2 * inv(k+0)", "0 + 1 * inv(k+1)"),
        ("vanishing R", "0 + 1/2 * inv(k+0)", "1"),
    ];
    table
        .iter()
        .map(|(name, r, p)| {
            let mut s = OmegaStructure::new();
            s.insert("R", r.parse().expect("catalog sequence"));
            s.insert("rho", p.parse().expect("catalog sequence"));
            (name.to_string(), s)
        })
        .collect()
}

/// The result of [`small_model_search`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub model: Option<FiniteStructure>,
    pub examined: u64,
}

/// Tries every structure with `1..=max_size` elements whose predicates take
/// values on the `1/grid` grid, and returns the first that models `t`.
pub fn small_model_search(
    t: &Theory,
    a: Algebra,
    sem: SemanticsMode,
    predicates: &[(&str, usize)],
    max_size: usize,
    grid: u32,
) -> Result<SearchOutcome> {
    t.check_sentences()?;
    let values = TruthValue::grid(grid);
    let mut examined = 0u64;
    for size in 1..=max_size {
        let universe: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
        let mut m = FiniteStructure::new(universe)?;
        let mut cells = Vec::new();
        for &(p, arity) in predicates {
            m.declare_predicate(p, arity, values[0].clone())?;
            for idx in 0..size.pow(arity as u32) {
                cells.push((p, m.decode(idx, arity)));
            }
        }
        let total = (values.len() as u128).checked_pow(cells.len() as u32).filter(|&c| c <= 1 << 32);
        let total = total.ok_or(Error::Budget { what: "small-model candidates", required: u128::MAX, limit: 1 << 32 })?;
        let mut digits = vec![0usize; cells.len()];
        for _ in 0..total {
            examined += 1;
            let mut ok = true;
            for f in &t.formulas {
                if !sem.is_designated(&interpret_indexed(sem, a, &m, f, &[])?) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(SearchOutcome { model: Some(m), examined });
            }
            for (pos, d) in digits.iter_mut().enumerate().rev() {
                *d += 1;
                let wrapped = *d == values.len();
                if wrapped {
                    *d = 0;
                }
                let (p, tuple) = &cells[pos];
                m.set_predicate(p, tuple, values[*d].clone())?;
                if !wrapped {
                    break;
                }
            }
        }
    }
    Ok(SearchOutcome { model: None, examined })
}
