//! The axiom schemas of basic logic and three derived theorems, checked as
//! value-level tautologies under random rational instantiations.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::generate::random_formula;
use crate::parser::parse_formula;
use crate::semantics::{evaluate, Evaluation, SemanticsMode};
use crate::value::TruthValue;

/// Schema names with their text over the metavariables `phi`, `psi`, `chi`
/// (and `phi2`, `psi2` for the two-pair monotonicity law).
pub const SCHEMAS: [(&str, &str); 11] = [
    ("A1", "(phi -> psi) -> (psi -> chi) -> phi -> chi"),
    ("A2", "phi & psi -> phi"),
    ("A3", "phi & psi -> psi & phi"),
    ("A4", "phi & (phi -> psi) -> psi & (psi -> phi)"),
    ("A5a", "(phi -> psi -> chi) -> phi & psi -> chi"),
    ("A5b", "(phi & psi -> chi) -> phi -> psi -> chi"),
    ("A6", "((phi -> psi) -> chi) -> ((psi -> phi) -> chi) -> chi"),
    ("A7", "0 -> phi"),
    ("l1", "phi -> psi -> phi"),
    ("l2", "phi & psi -> phi /\\ psi"),
    ("l3", "(phi -> psi) & (phi2 -> psi2) -> phi & phi2 -> psi & psi2"),
];

const METAVARIABLES: [&str; 5] = ["phi", "psi", "chi", "phi2", "psi2"];

/// Parsed schemas in [`SCHEMAS`] order.
pub fn schemas() -> Vec<(&'static str, Formula)> {
    SCHEMAS.iter().map(|(n, t)| (*n, parse_formula(t).expect("schema text parses"))).collect()
}

/// A random rational in `[0,1]` with denominator at most 64, endpoints included.
pub fn random_value(rng: &mut ChaCha8Rng) -> TruthValue {
    let den: i64 = rng.gen_range(1..=64);
    let num: i64 = rng.gen_range(0..=den);
    TruthValue::ratio(num, den).expect("num <= den")
}

/// Checks every schema at `samples` seeded random instantiations.
pub fn axiom_validity_audit(a: Algebra, sem: SemanticsMode, samples: usize, seed: u64) -> Result<AuditReport> {
    if samples == 0 {
        return Err(Error::Precondition("axiom audit needs at least one sample".into()));
    }
    let schemas = schemas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let designated = sem.designated();
    let mut report = AuditReport::new(format!("{a} {sem} axiom validity"));
    for _ in 0..samples {
        let mut v = Evaluation::new();
        for m in METAVARIABLES {
            v.insert(m, random_value(&mut rng));
        }
        for (name, f) in &schemas {
            let x = evaluate(sem, a, f, &v)?;
            report.check(x == designated, || format!("{name} at {v} gives {x}"));
        }
    }
    Ok(report.finish())
}

/// Compares metric evaluation with the complement of standard evaluation at
/// the complemented assignment, on `count` seeded random formulas of depth
/// at most `depth` over `p, q, r`.
pub fn semantic_duality_audit(a: Algebra, count: usize, depth: u32, seed: u64) -> Result<AuditReport> {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport::new(format!("{a} metric/standard duality"));
    for _ in 0..count {
        let f = random_formula(&mut rng, &ATOMS, depth);
        let mut v = Evaluation::new();
        for p in ATOMS {
            v.insert(p, random_value(&mut rng));
        }
        let metric = evaluate(SemanticsMode::Metric, a, &f, &v)?;
        let standard = evaluate(SemanticsMode::Standard, a, &f, &v.dual())?;
        report.check(metric == standard.complement(), || format!("{f} at {v}: metric {metric}, standard {standard}"));
    }
    Ok(report.finish())
}
