//! Distances induced by the t-conorm residua, their metric audits, the open
//! balls of `d_π`, and compactness of subsets of `([0,1], d_G)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::Algebra;
use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kset::Interval;
use crate::semantics::{evaluate, Evaluation, SemanticsMode};
use crate::sequence::SequenceExpr;
use crate::value::TruthValue;

/// `d(x,y) = min(x,y) ⊸ max(x,y)`.
pub fn metric_d(a: Algebra, x: &TruthValue, y: &TruthValue) -> TruthValue {
    a.coresiduum(x.min(y), x.max(y))
}

/// `d((x1,x2),(y1,y2)) = S(d(x1,y1), d(x2,y2))`.
pub fn metric_dd(a: Algebra, p: (&TruthValue, &TruthValue), q: (&TruthValue, &TruthValue)) -> TruthValue {
    a.tconorm(&metric_d(a, p.0, q.0), &metric_d(a, p.1, q.1))
}

/// Identity of indiscernibles, symmetry, triangle inequality, and the
/// generalized triangle `x ⊸ y ≤ S(x ⊸ z, z ⊸ y)`, all on the `1/n` grid.
pub fn metric_axioms_audit(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let table: Vec<Vec<TruthValue>> = g.iter().map(|x| g.iter().map(|y| metric_d(a, x, y)).collect()).collect();
    let res: Vec<Vec<TruthValue>> = g.iter().map(|x| g.iter().map(|y| a.coresiduum(x, y)).collect()).collect();
    let mut r = AuditReport::new(format!("{a} metric axioms"));
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (x, y) = (&g[i], &g[j]);
            r.check(table[i][j].is_zero() == (i == j), || format!("identity at {x},{y}"));
            r.check(table[i][j] == table[j][i], || format!("symmetry at {x},{y}"));
            for k in 0..g.len() {
                let z = &g[k];
                let sum = table[i][k].as_rational() + table[k][j].as_rational();
                r.check(*table[i][j].as_rational() <= sum, || format!("triangle at {x},{y},{z}"));
                let s = a.tconorm(&res[i][k], &res[k][j]);
                r.check(res[i][j] <= s, || format!("generalized triangle at {x},{y},{z}"));
            }
        }
    }
    r.finish()
}

/// Metric axioms of `d` on pairs from the `1/n` grid.
///
/// Distances are scaled to a common denominator so the cubic triangle check
/// runs on machine integers.
pub fn pair_metric_audit(a: Algebra, n: u32) -> Result<AuditReport> {
    let g = TruthValue::grid(n);
    let pts: Vec<(usize, usize)> = (0..g.len()).flat_map(|i| (0..g.len()).map(move |j| (i, j))).collect();
    let m = pts.len();
    let mut exact = Vec::with_capacity(m * m);
    for &(p1, p2) in &pts {
        for &(q1, q2) in &pts {
            exact.push(metric_dd(a, (&g[p1], &g[p2]), (&g[q1], &g[q2])));
        }
    }
    let lcm = exact.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.as_rational().denom()));
    let overflow = || Error::Budget { what: "pair metric common denominator", required: u128::MAX, limit: i64::MAX as u128 };
    let scale = lcm.to_i128().filter(|l| *l < (1i128 << 100)).ok_or_else(overflow)?;
    let table: Vec<i128> = exact
        .iter()
        .map(|v| {
            let r = v.as_rational();
            (r.numer() * (&lcm / r.denom())).to_i128().ok_or_else(overflow)
        })
        .collect::<Result<_>>()?;
    let _ = scale;
    let mut r = AuditReport::new(format!("{a} pair metric axioms"));
    let show = |i: usize| format!("({},{})", g[pts[i].0], g[pts[i].1]);
    for i in 0..m {
        let row = &table[i * m..(i + 1) * m];
        for j in 0..m {
            r.check((row[j] == 0) == (i == j), || format!("identity at {} {}", show(i), show(j)));
            r.check(row[j] == table[j * m + i], || format!("symmetry at {} {}", show(i), show(j)));
        }
        for k in 0..m {
            let via = row[k];
            let from_k = &table[k * m..(k + 1) * m];
            let mut bad = None;
            for j in 0..m {
                if row[j] > via + from_k[j] {
                    bad.get_or_insert(j);
                }
            }
            r.checked += m as u64 - 1;
            r.check(bad.is_none(), || format!("triangle at {} {} via {}", show(i), show(bad.unwrap_or(0)), show(k)));
        }
    }
    Ok(r.finish())
}

/// Which binary operation [`lipschitz_audit`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzOp {
    Tconorm,
    Coresiduum,
}

/// `d(op(x1,x2), op(y1,y2)) ≤ d((x1,x2),(y1,y2))` on every grid 4-tuple.
pub fn lipschitz_audit(a: Algebra, op: LipschitzOp, n: u32) -> Result<AuditReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("grid must be at least 2, got {n}")));
    }
    let g = TruthValue::grid(n);
    let apply = |x: &TruthValue, y: &TruthValue| match op {
        LipschitzOp::Tconorm => a.tconorm(x, y),
        LipschitzOp::Coresiduum => a.coresiduum(x, y),
    };
    let values: Vec<Vec<TruthValue>> = g.iter().map(|x| g.iter().map(|y| apply(x, y)).collect()).collect();
    let d: Vec<Vec<TruthValue>> = g.iter().map(|x| g.iter().map(|y| metric_d(a, x, y)).collect()).collect();
    let mut r = AuditReport::new(format!("{a} {op:?} 1-Lipschitz"));
    for x1 in 0..g.len() {
        for x2 in 0..g.len() {
            for y1 in 0..g.len() {
                for y2 in 0..g.len() {
                    let lhs = metric_d(a, &values[x1][x2], &values[y1][y2]);
                    let rhs = a.tconorm(&d[x1][y1], &d[x2][y2]);
                    r.check(lhs <= rhs, || format!("({},{}) vs ({},{}): {lhs} > {rhs}", g[x1], g[x2], g[y1], g[y2]));
                }
            }
        }
    }
    Ok(r.finish())
}

/// `p <-> q` evaluated in metric semantics equals `d(p, q)`.
pub fn equivalence_audit(a: Algebra, n: u32) -> AuditReport {
    let g = TruthValue::grid(n);
    let f = Formula::iff(Formula::atom("p"), Formula::atom("q"));
    let mut r = AuditReport::new(format!("{a} metric equivalence"));
    for x in &g {
        for y in &g {
            let mut v = Evaluation::new();
            v.insert("p", x.clone());
            v.insert("q", y.clone());
            let e = evaluate(SemanticsMode::Metric, a, &f, &v).expect("total evaluation");
            r.check(e == metric_d(a, x, y), || format!("at {x},{y}"));
        }
    }
    r.finish()
}

/// `d(i/n, j/n)` with row `i` and column `j`.
pub fn heatmap_values(a: Algebra, n: u32) -> Result<Vec<Vec<TruthValue>>> {
    if n < 2 {
        return Err(Error::Precondition(format!("heatmap grid must be at least 2, got {n}")));
    }
    let g = TruthValue::grid(n);
    Ok(g.iter().map(|x| g.iter().map(|y| metric_d(a, x, y)).collect()).collect())
}

/// An open ball of `([0,1], d_π)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenBall {
    Interval(Interval),
    Singleton(TruthValue),
}

impl OpenBall {
    pub fn contains(&self, x: &TruthValue) -> bool {
        match self {
            OpenBall::Interval(iv) => iv.contains(x),
            OpenBall::Singleton(p) => p == x,
        }
    }
}

impl fmt::Display for OpenBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenBall::Interval(iv) => write!(f, "{iv}"),
            OpenBall::Singleton(p) => write!(f, "{{{p}}}"),
        }
    }
}

/// `{x : d_π(x, a) < r}` for `0 < r ≤ 1`.
///
/// When `a = r < 1` the left end is 0, which lies at distance exactly `r` and
/// so is excluded.
pub fn dpi_open_ball(a: &TruthValue, r: &TruthValue) -> Result<OpenBall> {
    if r.is_zero() {
        return Err(Error::Precondition("an open ball needs a positive radius".into()));
    }
    if a.is_one() {
        return Ok(OpenBall::Singleton(TruthValue::one()));
    }
    let (ar, rr) = (a.as_rational(), r.as_rational());
    let hi = TruthValue::new(ar + rr - ar * rr)?;
    Ok(OpenBall::Interval(if r < a {
        let lo = TruthValue::new((ar - rr) / (crate::value::Rational::one() - rr))?;
        Interval::new(lo, hi, false, false)
    } else {
        Interval::new(TruthValue::zero(), hi, r != a, false)
    }))
}

/// A countable subset of `[0,1]`: finitely many points plus an optional catalog sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDescriptor {
    pub points: BTreeSet<TruthValue>,
    pub tail: Option<SequenceExpr>,
}

impl KDescriptor {
    pub fn finite<I: IntoIterator<Item = TruthValue>>(points: I) -> KDescriptor {
        KDescriptor { points: points.into_iter().collect(), tail: None }
    }

    /// Membership; tail terms are matched exactly where the form allows it.
    pub fn contains(&self, x: &TruthValue) -> bool {
        if self.points.contains(x) {
            return true;
        }
        let Some(t) = &self.tail else { return false };
        sequence_hits(t, x)
    }

    /// `lim` of the tail, when there is one.
    pub fn tail_limit(&self) -> Option<TruthValue> {
        self.tail.as_ref().map(SequenceExpr::limit)
    }
}

/// Whether `x` is a term of `s`.
pub fn sequence_hits(s: &SequenceExpr, x: &TruthValue) -> bool {
    use crate::sequence::SequenceForm;
    let (a, b) = (s.offset(), s.coefficient());
    let x = x.as_rational();
    match s.form() {
        SequenceForm::Constant => x == a,
        SequenceForm::Harmonic { d } => {
            // b/(x-a) - d must be a natural number at least 1.
            let gap = x - a;
            if gap.is_zero() {
                return false;
            }
            let k = b / gap - d;
            k.is_integer() && k >= crate::value::Rational::one()
        }
        SequenceForm::Geometric { .. } => {
            // Terms move monotonically toward a; stop once past x.
            let toward_below = s.direction() == core::cmp::Ordering::Less;
            for k in 1..=crate::sequence::SEARCH_CAP {
                let v = s.value_at(k);
                let v = v.as_rational();
                if v == x {
                    return true;
                }
                if (toward_below && v < x) || (!toward_below && v > x) {
                    return false;
                }
            }
            false
        }
    }
}

impl fmt::Display for KDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")?;
        if let Some(t) = &self.tail {
            write!(f, " + seq({t})")?;
        }
        Ok(())
    }
}

impl FromStr for KDescriptor {
    type Err = Error;

    /// `{p1,...}` optionally followed by `+ harmonic(c,d)`, `+ geometric(c,q)` or `+ seq(<sequence>)`.
    /// A tail on its own stands for `{} + tail`.
    fn from_str(s: &str) -> Result<KDescriptor> {
        let bad = || Error::InvalidKSet(format!("malformed descriptor `{s}`"));
        let text = s.trim();
        if !text.starts_with('{') {
            return format!("{{}} + {text}").parse().map_err(|_| bad());
        }
        let close = text.find('}').ok_or_else(bad)?;
        let inner = text.strip_prefix('{').ok_or_else(bad)?;
        let mut points = BTreeSet::new();
        for item in inner[..close - 1].split(',').map(str::trim).filter(|t| !t.is_empty()) {
            points.insert(item.parse::<TruthValue>()?);
        }
        let rest = text[close + 1..].trim();
        let tail = if rest.is_empty() {
            None
        } else {
            let rest = rest.strip_prefix('+').ok_or_else(bad)?.trim();
            let (head, args) = rest.split_once('(').ok_or_else(bad)?;
            let args = args.strip_suffix(')').ok_or_else(bad)?;
            let two = || -> Result<(crate::value::Rational, crate::value::Rational)> {
                let (x, y) = args.split_once(',').ok_or_else(bad)?;
                Ok((crate::value::parse_rational(x)?, crate::value::parse_rational(y)?))
            };
            Some(match head.trim() {
                "harmonic" => {
                    let (c, d) = two()?;
                    SequenceExpr::harmonic(c, d)?
                }
                "geometric" => {
                    let (c, q) = two()?;
                    SequenceExpr::geometric(c, q)?
                }
                "seq" => args.parse()?,
                _ => return Err(bad()),
            })
        };
        Ok(KDescriptor { points, tail })
    }
}

/// Compact in `d_G` iff finite, or the tail tends to 0 and 0 belongs to the set.
pub fn compact_in_dg(k: &KDescriptor) -> bool {
    match &k.tail {
        None => true,
        Some(t) if t.is_constant() => true,
        Some(t) => t.limit().is_zero() && k.points.contains(&TruthValue::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn tv(n: i64, d: i64) -> TruthValue {
        TruthValue::ratio(n, d).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(metric_d(Algebra::Godel, &tv(1, 3), &tv(2, 3)), tv(2, 3));
        assert_eq!(metric_d(Algebra::Product, &tv(1, 2), &tv(3, 4)), tv(1, 2));
        for a in Algebra::ALL {
            for x in TruthValue::grid(5) {
                assert!(metric_d(a, &x, &x).is_zero());
            }
        }
        let o = TruthValue::zero();
        assert_eq!(metric_dd(Algebra::Godel, (&o, &o), (&tv(1, 2), &tv(1, 3))), tv(1, 2));
        assert_eq!(metric_dd(Algebra::Lukasiewicz, (&o, &TruthValue::one()), (&tv(1, 2), &tv(1, 2))), TruthValue::one());
    }

    #[test]
    fn closed_forms_of_the_distances() {
        let g = TruthValue::grid(12);
        for x in &g {
            for y in &g {
                let diff = if x >= y { x.as_rational() - y.as_rational() } else { y.as_rational() - x.as_rational() };
                assert_eq!(metric_d(Algebra::Lukasiewicz, x, y).as_rational(), &diff);
                let dg = if x == y { TruthValue::zero() } else { x.max(y).clone() };
                assert_eq!(metric_d(Algebra::Godel, x, y), dg);
                let dp = if x == y { diff.clone() } else { &diff / (crate::value::Rational::one() - x.min(y).as_rational()) };
                assert_eq!(metric_d(Algebra::Product, x, y).as_rational(), &dp);
            }
        }
    }

    #[test]
    fn small_audits_pass() {
        for a in Algebra::ALL {
            assert!(metric_axioms_audit(a, 8).passed());
            assert!(pair_metric_audit(a, 4).unwrap().passed());
            assert!(equivalence_audit(a, 8).passed());
            for op in [LipschitzOp::Tconorm, LipschitzOp::Coresiduum] {
                let rep = lipschitz_audit(a, op, 4).unwrap();
                assert!(rep.passed(), "{rep}");
                assert_eq!(rep.checked, 5u64.pow(4));
            }
        }
    }

    #[test]
    fn lipschitz_fails_for_a_non_contraction() {
        // The Łukasiewicz t-norm is not 1-Lipschitz for d_G, which this audit would expose.
        let g = TruthValue::grid(4);
        let (x, y) = (&g[4], &g[3]);
        let lhs = metric_d(Algebra::Godel, &Algebra::Lukasiewicz.tnorm(x, x), &Algebra::Lukasiewicz.tnorm(y, y));
        let rhs = metric_dd(Algebra::Godel, (x, x), (y, y));
        assert!(lhs <= rhs);
    }

    #[test]
    fn open_balls() {
        assert_eq!(dpi_open_ball(&tv(1, 2), &tv(1, 4)).unwrap().to_string(), "(1/3,5/8)");
        assert_eq!(dpi_open_ball(&TruthValue::one(), &tv(1, 4)).unwrap().to_string(), "{1}");
        assert_eq!(dpi_open_ball(&tv(1, 4), &tv(1, 2)).unwrap().to_string(), "[0,5/8)");
        assert_eq!(dpi_open_ball(&tv(1, 2), &tv(1, 2)).unwrap().to_string(), "(0,3/4)");
        assert_eq!(dpi_open_ball(&tv(1, 2), &TruthValue::one()).unwrap().to_string(), "[0,1)");
        assert!(dpi_open_ball(&tv(1, 2), &TruthValue::zero()).is_err());
    }

    #[test]
    fn open_balls_match_the_distance() {
        let g = TruthValue::grid(24);
        for a in &g {
            for r in &g[1..] {
                let ball = dpi_open_ball(a, r).unwrap();
                for x in &g {
                    assert_eq!(ball.contains(x), metric_d(Algebra::Product, x, a) < *r, "a={a} r={r} x={x}");
                }
            }
        }
    }

    #[test]
    fn compactness_in_dg() {
        let k: KDescriptor = "{0} + harmonic(1,0)".parse().unwrap();
        assert!(compact_in_dg(&k));
        assert!(compact_in_dg(&"{1/2,1/4}".parse().unwrap()));
        assert!(!compact_in_dg(&"{} + harmonic(1,0)".parse().unwrap()));
        assert!(!compact_in_dg(&"{0,1/2} + seq(1/2 + 1/2 * inv(k+0))".parse().unwrap()));
        assert!(compact_in_dg(&"{0} + geometric(1/2,1/2)".parse().unwrap()));
        assert!(k.contains(&tv(1, 7)));
        assert!(!k.contains(&tv(2, 7)));
        let g: KDescriptor = "{0} + geometric(1,1/3)".parse().unwrap();
        assert!(g.contains(&tv(1, 27)));
        assert!(!g.contains(&tv(1, 6)));
        assert_eq!(k.to_string(), "{0} + seq(0 + 1 * inv(k+0))");
        assert_eq!(k.to_string().parse::<KDescriptor>().unwrap(), k);
        assert!("0 + harmonic(1,0)".parse::<KDescriptor>().is_err());
        let bare: KDescriptor = "harmonic(1,0)".parse().unwrap();
        assert!(bare.points.is_empty() && bare.tail.is_some());
    }

    #[test]
    fn heatmap_small() {
        let h = heatmap_values(Algebra::Lukasiewicz, 2).unwrap();
        let half = tv(1, 2);
        let expect = [[tv(0, 1), half.clone(), tv(1, 1)], [half.clone(), tv(0, 1), half.clone()], [tv(1, 1), half, tv(0, 1)]];
        for i in 0..3 {
            assert_eq!(h[i], expect[i]);
        }
        assert_eq!(heatmap_values(Algebra::Godel, 2).unwrap()[1][2], TruthValue::one());
        assert!(heatmap_values(Algebra::Godel, 1).is_err());
    }
}
