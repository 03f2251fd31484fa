//! Formula and term syntax trees, desugaring, and the canonical printer.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }
}

/// Basic-logic formulas.
///
/// `Atom`, `Bottom`, `Pred`, `Strong`, `Implies`, `Forall` and `Exists` are the
/// core cases; the remaining variants are derived connectives that
/// [`Formula::desugar`] rewrites away.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    Pred(String, Vec<Term>),
    Strong(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Top,
    /// `n`-fold strong conjunction of the base, `n ≥ 1`.
    StrongPow(Box<Formula>, u32),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.into())
    }

    /// Unary predicate applied to a variable, `P(x)`.
    pub fn unary(pred: &str, var: &str) -> Formula {
        Formula::Pred(pred.into(), alloc::vec![Term::var(var)])
    }

    pub fn strong(a: Formula, b: Formula) -> Formula {
        Formula::Strong(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn pow(base: Formula, n: u32) -> Formula {
        assert!(n >= 1, "strong power needs n >= 1");
        Formula::StrongPow(Box::new(base), n)
    }

    /// Rewrites derived connectives into `{Atom, Bottom, Pred, Strong, Implies, Forall, Exists}`.
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        match self {
            Atom(_) | Bottom | Pred(..) => self.clone(),
            Strong(a, b) => Formula::strong(a.desugar(), b.desugar()),
            Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Forall(v, b) => Formula::forall(v, b.desugar()),
            Exists(v, b) => Formula::exists(v, b.desugar()),
            And(a, b) => desugar_and(a.desugar(), b.desugar()),
            Or(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                let left = Formula::implies(Formula::implies(a.clone(), b.clone()), b.clone());
                let right = Formula::implies(Formula::implies(b, a.clone()), a);
                desugar_and(left, right)
            }
            Not(a) => Formula::implies(a.desugar(), Bottom),
            Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::strong(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
            }
            Top => Formula::implies(Bottom, Bottom),
            StrongPow(base, n) => {
                let base = base.desugar();
                let mut acc = base.clone();
                for _ in 1..*n {
                    acc = Formula::strong(acc, base.clone());
                }
                acc
            }
        }
    }

    /// True when only core connectives occur.
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            Atom(_) | Bottom | Pred(..) => true,
            Strong(a, b) | Implies(a, b) => a.is_core() && b.is_core(),
            Forall(_, b) | Exists(_, b) => b.is_core(),
            And(..) | Or(..) | Not(_) | Iff(..) | Top | StrongPow(..) => false,
        }
    }

    /// No predicates with arguments and no quantifiers.
    pub fn is_propositional(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..)) {
                ok = false;
            }
        });
        ok
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Forall(..) | Formula::Exists(..)) {
                ok = false;
            }
        });
        ok
    }

    /// Propositional atoms (nullary predicate symbols) occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Predicate symbols with their arities (atoms have arity 0).
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                out.insert((a.clone(), 0));
            }
            Formula::Pred(p, args) => {
                out.insert((p.clone(), args.len()));
            }
            _ => {}
        });
        out
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Variables bound by some quantifier in the formula.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Forall(v, _) | Formula::Exists(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        use Formula::*;
        match self {
            Atom(_) | Bottom | Top => {}
            Pred(_, args) => {
                let mut vs = BTreeSet::new();
                args.iter().for_each(|t| t.collect_vars(&mut vs));
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Strong(a, b) | Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Not(a) | StrongPow(a, _) => a.collect_free(bound, out),
            Forall(v, body) | Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        use Formula::*;
        f(self);
        match self {
            Atom(_) | Bottom | Top | Pred(..) => {}
            Strong(a, b) | Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Not(a) | StrongPow(a, _) | Forall(_, a) | Exists(_, a) => a.visit(f),
        }
    }

    /// Height of the syntax tree, atoms and constants having depth 0.
    pub fn depth(&self) -> usize {
        use Formula::*;
        match self {
            Atom(_) | Bottom | Top | Pred(..) => 0,
            Strong(a, b) | Implies(a, b) | And(a, b) | Or(a, b) | Iff(a, b) => 1 + a.depth().max(b.depth()),
            Not(a) | StrongPow(a, _) | Forall(_, a) | Exists(_, a) => 1 + a.depth(),
        }
    }

    fn precedence(&self) -> u8 {
        use Formula::*;
        match self {
            Iff(..) => 1,
            Implies(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            Strong(..) => 5,
            Not(_) | Forall(..) | Exists(..) => 6,
            Atom(_) | Bottom | Top | Pred(..) => 7,
            StrongPow(base, _) if is_atomic(base) => 7,
            StrongPow(base, 1) => base.precedence(),
            StrongPow(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        self.write_bare(f)?;
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Atom(a) => f.write_str(a),
            Bottom => f.write_str("0"),
            Top => f.write_str("1"),
            Pred(p, args) => write_app(f, p, args),
            Strong(a, b) => write_left_assoc(f, a, "&", b, 5),
            And(a, b) => write_left_assoc(f, a, "/\\", b, 4),
            Or(a, b) => write_left_assoc(f, a, "\\/", b, 3),
            Iff(a, b) => write_left_assoc(f, a, "<->", b, 1),
            Implies(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" -> ")?;
                b.write_at(f, 2)
            }
            Not(a) => {
                f.write_str("~")?;
                a.write_at(f, 6)
            }
            Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.write_at(f, 6)
            }
            Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.write_at(f, 6)
            }
            StrongPow(base, n) if is_atomic(base) => {
                base.write_bare(f)?;
                write!(f, "^{n}")
            }
            // The grammar only allows `^` after an atomic formula; other bases
            // are printed as the equivalent strong-conjunction chain.
            StrongPow(base, 1) => base.write_bare(f),
            StrongPow(base, n) => {
                base.write_at(f, 5)?;
                for _ in 1..*n {
                    f.write_str(" & ")?;
                    base.write_at(f, 6)?;
                }
                Ok(())
            }
        }
    }
}

fn desugar_and(a: Formula, b: Formula) -> Formula {
    Formula::strong(a.clone(), Formula::implies(a, b))
}

fn is_atomic(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_) | Formula::Pred(..))
}

fn write_left_assoc(f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, prec: u8) -> fmt::Result {
    a.write_at(f, prec)?;
    write!(f, " {op} ")?;
    b.write_at(f, prec + 1)
}

fn write_app(f: &mut fmt::Formatter<'_>, name: &str, args: &[Term]) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, t) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => write_app(f, name, args),
        }
    }
}

/// Renders with the minimal parentheses needed under
/// `~ > & > /\ > \/ > -> > <->` (with `->` right-associative).
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

/// An ordered list of formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub name: String,
    pub formulas: Vec<Formula>,
}

impl Theory {
    pub fn new(name: &str, formulas: Vec<Formula>) -> Theory {
        Theory { name: name.into(), formulas }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Union of the atoms of every formula, sorted.
    pub fn atoms(&self) -> Vec<String> {
        let mut all = BTreeSet::new();
        for f in &self.formulas {
            all.extend(f.atoms());
        }
        all.into_iter().collect()
    }

    pub fn is_propositional(&self) -> bool {
        self.formulas.iter().all(Formula::is_propositional)
    }

    /// First-order theories must consist of sentences.
    pub fn check_sentences(&self) -> crate::Result<()> {
        for f in &self.formulas {
            if let Some(v) = f.free_vars().into_iter().next() {
                return Err(crate::Error::UnboundVariable(v));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for formula in &self.formulas {
            writeln!(f, "{formula}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn desugar_cases() {
        assert_eq!(Formula::not(p()).desugar(), Formula::implies(p(), Formula::Bottom));
        assert_eq!(
            Formula::and(p(), q()).desugar(),
            Formula::strong(p(), Formula::implies(p(), q()))
        );
        let rho = Formula::unary("rho", "x");
        assert_eq!(Formula::pow(rho.clone(), 2).desugar(), Formula::strong(rho.clone(), rho.clone()));
        assert_eq!(Formula::pow(rho.clone(), 1).desugar(), rho);
        assert_eq!(Formula::Top.desugar(), Formula::implies(Formula::Bottom, Formula::Bottom));
        let or = Formula::or(p(), q()).desugar();
        assert!(or.is_core());
        assert_eq!(or.desugar(), or);
    }

    #[test]
    fn render_examples() {
        let f = Formula::implies(p(), Formula::implies(q(), Formula::atom("r")));
        assert_eq!(f.to_string(), "p -> q -> r");
        let g = Formula::implies(Formula::implies(p(), q()), Formula::atom("r"));
        assert_eq!(g.to_string(), "(p -> q) -> r");
        assert_eq!(Formula::strong(p(), q()).to_string(), "p & q");
        let h = Formula::forall("x", Formula::not(Formula::unary("R", "x")));
        assert_eq!(h.to_string(), "forall x. ~R(x)");
        let body = Formula::implies(Formula::unary("R", "x"), Formula::pow(Formula::unary("rho", "x"), 2));
        assert_eq!(Formula::forall("x", body).to_string(), "forall x. (R(x) -> rho(x)^2)");
        let mixed = Formula::or(Formula::and(p(), q()), Formula::strong(p(), Formula::Top));
        assert_eq!(mixed.to_string(), "p /\\ q \\/ p & 1");
        let iff = Formula::iff(Formula::iff(p(), q()), p());
        assert_eq!(iff.to_string(), "p <-> q <-> p");
        assert_eq!(Formula::iff(p(), Formula::iff(q(), p())).to_string(), "p <-> (q <-> p)");
        assert_eq!(Formula::pow(Formula::strong(p(), q()), 2).to_string(), "p & q & (p & q)");
    }

    #[test]
    fn variables() {
        let f = Formula::forall("x", Formula::Pred("R".into(), alloc::vec![Term::var("x"), Term::var("y")]));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["y"]);
        assert_eq!(f.bound_vars().into_iter().collect::<Vec<_>>(), ["x"]);
        assert!(!f.is_sentence());
        assert!(!f.is_propositional());
        assert_eq!(f.depth(), 1);
    }
}
