//! Exhaustive grid audits of the algebraic laws.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{residuum_oracle, Algebra, OracleMode};
use crate::error::Result;
use crate::value::{Rational, TruthValue};

/// Number of violation witnesses kept verbatim.
const WITNESS_CAP: usize = 64;

/// Outcome of checking one law over a finite set of instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub name: String,
    pub checked: u64,
    pub violation_count: u64,
    /// Witnesses of violations, sorted; at most 64 are kept.
    pub violations: Vec<String>,
    /// Largest observed deviation, for audits that measure one.
    pub max_deviation: Option<Rational>,
}

impl AuditReport {
    pub fn new(name: impl Into<String>) -> AuditReport {
        AuditReport { name: name.into(), checked: 0, violation_count: 0, violations: Vec::new(), max_deviation: None }
    }

    /// Records one instance; `witness` is only rendered on failure.
    pub fn check(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            self.violation_count += 1;
            if self.violations.len() < WITNESS_CAP {
                self.violations.push(witness());
            }
        }
    }

    pub fn observe_deviation(&mut self, d: Rational) {
        if self.max_deviation.as_ref().is_none_or(|m| d > *m) {
            self.max_deviation = Some(d);
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: AuditReport) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < WITNESS_CAP {
                self.violations.push(format!("{}: {v}", other.name));
            }
        }
        if let Some(d) = other.max_deviation {
            self.observe_deviation(d);
        }
    }

    pub fn finish(mut self) -> AuditReport {
        self.violations.sort();
        self
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checked, {} violations", self.name, self.checked, self.violation_count)?;
        if let Some(d) = &self.max_deviation {
            write!(f, ", max deviation {d}")?;
        }
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Commutativity, associativity, monotonicity and unit 1.
pub fn tnorm_laws(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let one = TruthValue::one();
    let mut r = AuditReport::new(format!("{a} t-norm laws"));
    for x in &g {
        r.check(a.tnorm(&one, x) == *x, || format!("unit at {x}"));
        for y in &g {
            let xy = a.tnorm(x, y);
            r.check(xy == a.tnorm(y, x), || format!("commutativity at {x},{y}"));
            for z in &g {
                r.check(a.tnorm(&xy, z) == a.tnorm(x, &a.tnorm(y, z)), || format!("associativity at {x},{y},{z}"));
                if y <= z {
                    r.check(xy <= a.tnorm(x, z), || format!("monotonicity at {x},{y},{z}"));
                }
            }
        }
    }
    r.finish()
}

/// Commutativity, associativity, monotonicity, unit 0 and absorption of 1.
pub fn tconorm_laws(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let (zero, one) = (TruthValue::zero(), TruthValue::one());
    let mut r = AuditReport::new(format!("{a} t-conorm laws"));
    for x in &g {
        r.check(a.tconorm(&zero, x) == *x, || format!("unit at {x}"));
        r.check(a.tconorm(&one, x) == one, || format!("absorption at {x}"));
        for y in &g {
            let xy = a.tconorm(x, y);
            r.check(xy == a.tconorm(y, x), || format!("commutativity at {x},{y}"));
            for z in &g {
                r.check(a.tconorm(&xy, z) == a.tconorm(x, &a.tconorm(y, z)), || format!("associativity at {x},{y},{z}"));
                if y <= z {
                    r.check(xy <= a.tconorm(x, z), || format!("monotonicity at {x},{y},{z}"));
                }
            }
        }
    }
    r.finish()
}

/// `T(z,x) ≤ y ⇔ z ≤ x ⇒ y`.
pub fn tnorm_adjointness(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let mut r = AuditReport::new(format!("{a} t-norm adjointness"));
    for x in &g {
        for y in &g {
            let res = a.residuum(x, y);
            for z in &g {
                r.check((a.tnorm(z, x) <= *y) == (*z <= res), || format!("x={x} y={y} z={z}"));
            }
        }
    }
    r.finish()
}

/// `S(z,x) ≥ y ⇔ z ≥ x ⊸ y`.
pub fn tconorm_adjointness(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let mut r = AuditReport::new(format!("{a} t-conorm adjointness"));
    for x in &g {
        for y in &g {
            let res = a.coresiduum(x, y);
            for z in &g {
                r.check((a.tconorm(z, x) >= *y) == (*z >= res), || format!("x={x} y={y} z={z}"));
            }
        }
    }
    r.finish()
}

/// `S(x,y) = 1 - T(1-x,1-y)` and `x ⊸ y = 1 - ((1-x) ⇒ (1-y))`.
pub fn duality(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let mut r = AuditReport::new(format!("{a} conorm duality"));
    for x in &g {
        for y in &g {
            let (cx, cy) = (x.complement(), y.complement());
            r.check(a.tconorm(x, y) == a.tnorm(&cx, &cy).complement(), || format!("S at {x},{y}"));
            r.check(a.coresiduum(x, y) == a.residuum(&cx, &cy).complement(), || format!("coresiduum at {x},{y}"));
        }
    }
    r.finish()
}

/// `S_G ≤ S_π ≤ S_L` pointwise.
pub fn conorm_ordering(n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let mut r = AuditReport::new("conorm ordering");
    for x in &g {
        for y in &g {
            let sg = Algebra::Godel.tconorm(x, y);
            let sp = Algebra::Product.tconorm(x, y);
            let sl = Algebra::Lukasiewicz.tconorm(x, y);
            r.check(sg <= sp && sp <= sl, || format!("at {x},{y}: {sg} {sp} {sl}"));
        }
    }
    r.finish()
}

/// The five conorm identities and inequalities fa1 to fa5.
pub fn conorm_lemmas(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let s = |x: &TruthValue, y: &TruthValue| a.tconorm(x, y);
    let c = |x: &TruthValue, y: &TruthValue| a.coresiduum(x, y);
    let mut r = AuditReport::new(format!("{a} conorm lemmas"));
    for x in &g {
        for y in &g {
            let xy = c(x, y);
            r.check(s(x, &xy) == *x.max(y), || format!("fa1 at {x},{y}"));
            r.check(*y >= xy, || format!("fa3 at {x},{y}"));
            r.check(s(x, y) >= *x.max(y), || format!("fa4 at {x},{y}"));
            for z in &g {
                r.check(xy >= c(&c(y, z), &c(x, z)), || format!("fa2 at {x},{y},{z}"));
            }
            for x2 in &g {
                for y2 in &g {
                    let lhs = s(&xy, &c(x2, y2));
                    r.check(lhs >= c(&s(x, x2), &s(y, y2)), || format!("fa5 at {x},{y},{x2},{y2}"));
                }
            }
        }
    }
    r.finish()
}

/// Closed-form residua against the grid extremum oracles.
///
/// For every input on the `1/n` grid, the oracle at resolution `oracle_n`
/// must land within `1/oracle_n` of the closed form, on the documented side.
pub fn oracle_agreement(a: Algebra, n: u32, oracle_n: u32) -> Result<AuditReport> {
    let g = TruthValue::grid(n);
    let tol = Rational::new(1.into(), oracle_n.into());
    let zero = Rational::from_integer(0.into());
    let mut r = AuditReport::new(format!("{a} residuum oracles"));
    for x in &g {
        for y in &g {
            let exact = a.residuum(x, y);
            let approx = residuum_oracle(a, OracleMode::TnormSup, x, y, oracle_n)?;
            let d = exact.as_rational() - approx.as_rational();
            r.check(d >= zero && d <= tol, || format!("t-norm sup at {x},{y}: {approx} vs {exact}"));
            r.observe_deviation(d);
            let exact = a.coresiduum(x, y);
            let approx = residuum_oracle(a, OracleMode::TconormMin, x, y, oracle_n)?;
            let d = approx.as_rational() - exact.as_rational();
            r.check(d >= zero && d <= tol, || format!("t-conorm min at {x},{y}: {approx} vs {exact}"));
            r.observe_deviation(d);
        }
    }
    Ok(r.finish())
}

/// Every algebra law audit at grid `n`, one report per law and family.
pub fn algebra_laws(n: u32) -> Vec<AuditReport> {
    let mut out = Vec::new();
    for a in Algebra::ALL {
        out.push(tnorm_laws(a, n));
        out.push(tconorm_laws(a, n));
        out.push(tnorm_adjointness(a, n));
        out.push(tconorm_adjointness(a, n));
        out.push(duality(a, n));
    }
    out.push(conorm_ordering(n));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_hold_on_small_grid() {
        for rep in algebra_laws(8) {
            assert!(rep.passed(), "{rep}");
            assert!(rep.checked > 0);
        }
        for a in Algebra::ALL {
            let rep = conorm_lemmas(a, 6);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn oracle_within_tolerance() {
        for a in Algebra::ALL {
            let rep = oracle_agreement(a, 8, 64).unwrap();
            assert!(rep.passed(), "{rep}");
            assert!(rep.max_deviation.unwrap() <= Rational::new(1.into(), 64.into()));
        }
    }

    #[test]
    fn report_records_sorted_witnesses() {
        let mut r = AuditReport::new("demo");
        r.check(false, || "b".into());
        r.check(true, || unreachable!());
        r.check(false, || "a".into());
        let r = r.finish();
        assert_eq!(r.violations, ["a", "b"]);
        assert_eq!((r.checked, r.violation_count), (3, 2));
        assert!(!r.passed());
    }
}
