//! Ultraproducts of finite structures along ultrafilters on finite index sets,
//! the Łoś equality check, and the compactness construction on finite theories.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::filters::{d_limit, mask_string, Family, FilterDesc, GodelSet};
use crate::fo::{check_theory, interpret_indexed, FiniteStructure, StructureRef};
use crate::formula::{Formula, Theory};
use crate::semantics::SemanticsMode;
use crate::value::TruthValue;

/// Size limits for the exhaustive constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_index: usize,
    pub max_factor: usize,
    /// Most variable assignments [`los_check`] will enumerate.
    pub max_assignments: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_index: 4, max_factor: 3, max_assignments: 1 << 16 }
    }
}

/// The ultraproduct, its filter, and the coordinates of each element.
#[derive(Debug, Clone)]
pub struct Ultraproduct {
    pub structure: FiniteStructure,
    pub filter: FilterDesc,
    coords: Vec<Vec<usize>>,
}

impl Ultraproduct {
    /// Coordinates of element `e`, one per factor.
    pub fn coordinates(&self, e: usize) -> &[usize] {
        &self.coords[e]
    }

    pub fn factor_count(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }
}

fn tuple_id(factors: &[FiniteStructure], coords: &[usize]) -> String {
    let parts: Vec<&str> = factors.iter().zip(coords).map(|(m, &c)| m.universe()[c].as_str()).collect();
    format!("({})", parts.join(","))
}

/// Every tuple of `arity` positions below `size`, the first entry most significant.
fn tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = size.pow(arity as u32);
    (0..total).map(move |mut idx| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % size;
            idx /= size;
        }
        t
    })
}

fn validate(structures: &[FiniteStructure], f: &FilterDesc, space: &GodelSet, budget: Budget) -> Result<()> {
    let Some(index) = f.index() else {
        return Err(Error::InvalidFilter("ultraproducts need an ultrafilter on a finite index set".into()));
    };
    if !f.is_ultrafilter() {
        return Err(Error::InvalidFilter(format!("{f} is not an ultrafilter")));
    }
    if structures.len() != index.len() {
        return Err(Error::InvalidFilter(format!("{} factors for an index set of {}", structures.len(), index.len())));
    }
    if structures.len() > budget.max_index {
        return Err(Error::Budget { what: "factor count", required: structures.len() as u128, limit: budget.max_index as u128 });
    }
    for m in structures {
        if m.size() > budget.max_factor {
            return Err(Error::Budget { what: "factor universe size", required: m.size() as u128, limit: budget.max_factor as u128 });
        }
        if m.signature() != structures[0].signature() {
            return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", m.signature(), structures[0].signature())));
        }
        if let Some(v) = m.values().find(|v| !space.contains(v)) {
            return Err(Error::ValueOutsideSet(v.clone()));
        }
    }
    Ok(())
}

/// The `D`-ultraproduct of `structures`: the full product, limits for predicates, coordinatewise functions.
pub fn ultraproduct(structures: &[FiniteStructure], f: &FilterDesc, space: &GodelSet, budget: Budget) -> Result<Ultraproduct> {
    validate(structures, f, space, budget)?;
    let radices: Vec<usize> = structures.iter().map(FiniteStructure::size).collect();
    let mut coords: Vec<Vec<usize>> = vec![Vec::new()];
    for &r in &radices {
        coords = coords.into_iter().flat_map(|c| (0..r).map(move |x| [c.as_slice(), &[x]].concat())).collect();
    }
    let universe: Vec<String> = coords.iter().map(|c| tuple_id(structures, c)).collect();
    let size = universe.len();
    let locate = |c: &[usize]| c.iter().zip(&radices).fold(0, |acc, (&x, &r)| acc * r + x);
    let mut out = FiniteStructure::new(universe)?;
    let sig = structures[0].signature().clone();
    for (name, &arity) in sig.predicates() {
        out.declare_predicate(name, arity, TruthValue::zero())?;
        for t in tuples(size, arity) {
            let family: Vec<TruthValue> = structures
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let proj: Vec<usize> = t.iter().map(|&e| coords[e][i]).collect();
                    m.predicate_value(name, &proj).cloned()
                })
                .collect::<Result<_>>()?;
            out.set_predicate(name, &t, d_limit(&Family::Finite(family), f, space)?)?;
        }
    }
    for (name, &arity) in sig.functions() {
        out.declare_function(name, arity, 0)?;
        for t in tuples(size, arity) {
            let image: Vec<usize> = structures
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let proj: Vec<usize> = t.iter().map(|&e| coords[e][i]).collect();
                    m.function_value(name, &proj)
                })
                .collect::<Result<_>>()?;
            out.set_function(name, &t, locate(&image))?;
        }
    }
    Ok(Ultraproduct { structure: out, filter: f.clone(), coords })
}

/// One assignment where the two sides of Łoś differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LosMismatch {
    pub assignment: String,
    pub product_value: TruthValue,
    pub limit_value: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LosReport {
    pub formula: Formula,
    pub instances: u64,
    pub mismatches: Vec<LosMismatch>,
    /// The value of a sentence on both sides, when they agree.
    pub sentence_value: Option<TruthValue>,
}

impl LosReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for LosReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds() { "equal" } else { "DIFFER" };
        write!(f, "{}: {verdict} on {} assignments", self.formula, self.instances)?;
        if let Some(v) = &self.sentence_value {
            write!(f, ", value {v}")?;
        }
        for m in &self.mismatches {
            write!(f, "\n  {}: product {} vs limit {}", m.assignment, m.product_value, m.limit_value)?;
        }
        Ok(())
    }
}

/// Compares `φ` in the ultraproduct with the `D`-limit of `φ` in the factors,
/// in standard Gödel semantics, on every assignment of the free variables.
pub fn los_check(structures: &[FiniteStructure], f: &FilterDesc, space: &GodelSet, formula: &Formula, budget: Budget) -> Result<LosReport> {
    let u = ultraproduct(structures, f, space, budget)?;
    los_check_in(&u, structures, space, formula, budget)
}

/// [`los_check`] against an already built ultraproduct.
pub fn los_check_in(u: &Ultraproduct, structures: &[FiniteStructure], space: &GodelSet, formula: &Formula, budget: Budget) -> Result<LosReport> {
    let (sem, a) = (SemanticsMode::Standard, Algebra::Godel);
    let vars: Vec<String> = formula.free_vars().into_iter().collect();
    let size = u.structure.size();
    let count = size.checked_pow(vars.len() as u32).filter(|&c| c <= budget.max_assignments);
    if count.is_none() {
        return Err(Error::Budget { what: "Łoś assignments", required: u128::MAX, limit: budget.max_assignments as u128 });
    }
    let mut report = LosReport { formula: formula.clone(), instances: 0, mismatches: Vec::new(), sentence_value: None };
    // Factor values depend only on the local assignment, so each factor is evaluated once per local tuple.
    let local_tables: Vec<Vec<TruthValue>> = structures
        .iter()
        .map(|m| {
            tuples(m.size(), vars.len())
                .map(|t| {
                    let local: Vec<(String, usize)> = vars.iter().cloned().zip(t).collect();
                    interpret_indexed(sem, a, m, formula, &local)
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    for t in tuples(size, vars.len()) {
        let env: Vec<(String, usize)> = vars.iter().cloned().zip(t.iter().copied()).collect();
        let lhs = interpret_indexed(sem, a, &u.structure, formula, &env)?;
        if !space.contains(&lhs) {
            return Err(Error::ValueOutsideSet(lhs));
        }
        let family: Vec<TruthValue> = structures
            .iter()
            .enumerate()
            .map(|(i, m)| local_tables[i][t.iter().fold(0, |acc, &e| acc * m.size() + u.coords[e][i])].clone())
            .collect();
        let rhs = d_limit(&Family::Finite(family), &u.filter, space)?;
        report.instances += 1;
        if lhs != rhs {
            let assignment = env.iter().map(|(v, e)| format!("{v}={}", u.structure.universe()[*e])).collect::<Vec<_>>().join(",");
            report.mismatches.push(LosMismatch { assignment, product_value: lhs, limit_value: rhs });
        } else if vars.is_empty() {
            report.sentence_value = Some(lhs);
        }
    }
    Ok(report)
}

/// The outcome of [`compactness_demo`].
#[derive(Debug, Clone)]
pub struct CompactnessReport {
    /// Every subset of the theory, as sentence positions, in index order.
    pub index: Vec<Vec<usize>>,
    /// `{Σ : φ ∈ Σ}` for each sentence `φ`, as index labels.
    pub sentence_sets: Vec<String>,
    pub finite_intersection_property: bool,
    pub filter: FilterDesc,
    pub los: Vec<LosReport>,
    /// The ultraproduct gives every sentence the value 1.
    pub models: bool,
    pub product_size: usize,
}

impl fmt::Display for CompactnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "index: {} finite subsets", self.index.len())?;
        for (i, s) in self.sentence_sets.iter().enumerate() {
            writeln!(f, "sentence {}: {s}", i + 1)?;
        }
        writeln!(f, "finite intersection property: {}", self.finite_intersection_property)?;
        writeln!(f, "ultrafilter: {}", self.filter)?;
        writeln!(f, "ultraproduct universe: {} elements", self.product_size)?;
        for r in &self.los {
            writeln!(f, "{r}")?;
        }
        write!(f, "models: {}", self.models)
    }
}

/// Builds a model of a finite theory from models of its subsets.
///
/// The index set is every subset of `t`, labelled by its bitmask plus one.
/// `factory` receives the positions of the sentences in a subset and must
/// return a model of that subset in standard Gödel semantics. The truth-value
/// set is the finite set of values the factory models use, with 0 and 1.
pub fn compactness_demo<F>(t: &Theory, mut factory: F, budget: Budget) -> Result<CompactnessReport>
where
    F: FnMut(&[usize]) -> Result<FiniteStructure>,
{
    t.check_sentences()?;
    let n = t.len();
    let subsets = 1usize.checked_shl(n as u32).filter(|&s| s <= budget.max_index);
    let Some(subsets) = subsets else {
        return Err(Error::Budget { what: "subsets of the theory", required: 1u128 << n.min(127), limit: budget.max_index as u128 });
    };
    let index: Vec<Vec<usize>> = (0..subsets).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
    let labels: Vec<u32> = (1..=subsets as u32).collect();
    let sentence_masks: Vec<u64> = (0..n).map(|i| (0..subsets).filter(|m| m >> i & 1 == 1).fold(0u64, |acc, m| acc | 1 << m)).collect();
    let finite_intersection_property =
        (0..1u64 << n).all(|pick| (0..n).filter(|i| pick >> i & 1 == 1).fold(!0u64 >> (64 - subsets), |acc, i| acc & sentence_masks[i]) != 0);
    let full = subsets - 1;
    let filter = FilterDesc::Principal { index: labels.clone(), at: full };
    debug_assert!(sentence_masks.iter().all(|m| m >> full & 1 == 1));

    let mut models = Vec::with_capacity(subsets);
    for sigma in &index {
        let m = factory(sigma)?;
        let sub = Theory::new("subset", sigma.iter().map(|&i| t.formulas[i].clone()).collect());
        let rep = check_theory(StructureRef::Finite(&m), Algebra::Godel, SemanticsMode::Standard, &sub)?;
        if let Some(bad) = rep.sentences.iter().find(|s| !s.designated) {
            let subset = format!("{{{}}}", sigma.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","));
            return Err(Error::FactoryNonModel { subset, sentence: bad.formula.to_string() });
        }
        models.push(m);
    }
    let mut values: BTreeSet<TruthValue> = models.iter().flat_map(|m| m.values().cloned()).collect();
    values.insert(TruthValue::zero());
    values.insert(TruthValue::one());
    let space = GodelSet::finite(values);
    let u = ultraproduct(&models, &filter, &space, budget)?;
    let los: Vec<LosReport> = t.formulas.iter().map(|f| los_check_in(&u, &models, &space, f, budget)).collect::<Result<_>>()?;
    let models_t = los.iter().all(|r| r.holds() && r.sentence_value.as_ref().is_some_and(TruthValue::is_one));
    Ok(CompactnessReport {
        sentence_sets: sentence_masks.iter().map(|&m| mask_string(&labels, m)).collect(),
        index,
        finite_intersection_property,
        filter,
        los,
        models: models_t,
        product_size: u.structure.size(),
    })
}
