//! First-order structures over finite universes and the Tarskian value of
//! formulas in them, with quantifiers read as min and max.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::formula::{Formula, Term, Theory};
use crate::omega::{omega_interpret, OmegaStructure};
use crate::semantics::{Connectives, SemanticsMode};
use crate::value::TruthValue;

/// Predicate and function symbols with their arities. Names are unique across both.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        self.add(name, arity, true)
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<()> {
        self.add(name, arity, false)
    }

    fn add(&mut self, name: &str, arity: usize, predicate: bool) -> Result<()> {
        let (mine, other) =
            if predicate { (&mut self.predicates, &self.functions) } else { (&mut self.functions, &self.predicates) };
        if other.contains_key(name) {
            return Err(Error::SignatureMismatch(format!("`{name}` is both a predicate and a function")));
        }
        match mine.get(name) {
            Some(&a) if a != arity => {
                Err(Error::ArityMismatch { symbol: name.into(), expected: a, found: arity })
            }
            _ => {
                mine.insert(name.into(), arity);
                Ok(())
            }
        }
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.predicates.iter()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.functions.iter()
    }
}

/// A finite structure with dense predicate and function tables.
///
/// A tuple `(e_1, ..., e_n)` is stored at the mixed-radix index with `e_1`
/// most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    universe: Vec<String>,
    signature: Signature,
    predicates: BTreeMap<String, Vec<TruthValue>>,
    functions: BTreeMap<String, Vec<usize>>,
}

/// Variable assignment by element id.
pub type Assignment = BTreeMap<String, String>;

impl FiniteStructure {
    pub fn new(universe: Vec<String>) -> Result<FiniteStructure> {
        if universe.is_empty() {
            return Err(Error::InvalidStructure("the universe must be nonempty".into()));
        }
        let mut sorted = universe.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidStructure(format!("element `{}` is listed twice", w[0])));
        }
        Ok(FiniteStructure { universe, signature: Signature::new(), predicates: BTreeMap::new(), functions: BTreeMap::new() })
    }

    /// Builds a structure from sparse entries, requiring every table to be total.
    pub fn from_entries(
        universe: Vec<String>,
        predicates: &[(String, Vec<String>, TruthValue)],
        functions: &[(String, Vec<String>, String)],
    ) -> Result<FiniteStructure> {
        let mut s = FiniteStructure::new(universe)?;
        let mut seen: BTreeMap<String, Vec<bool>> = BTreeMap::new();
        for (name, args, value) in predicates {
            if s.signature.predicate_arity(name).is_none() {
                s.declare_predicate(name, args.len(), TruthValue::zero())?;
                seen.insert(name.clone(), vec![false; s.table_len(args.len())]);
            }
            let idx = s.index_of_ids(name, args, s.signature.predicate_arity(name))?;
            s.predicates.get_mut(name).expect("declared")[idx] = value.clone();
            seen.get_mut(name).expect("declared")[idx] = true;
        }
        for (name, args, target) in functions {
            if s.signature.function_arity(name).is_none() {
                s.declare_function(name, args.len(), 0)?;
                seen.insert(name.clone(), vec![false; s.table_len(args.len())]);
            }
            let idx = s.index_of_ids(name, args, s.signature.function_arity(name))?;
            let t = s.element(target)?;
            s.functions.get_mut(name).expect("declared")[idx] = t;
            seen.get_mut(name).expect("declared")[idx] = true;
        }
        for (name, marks) in &seen {
            if let Some(i) = marks.iter().position(|m| !m) {
                let arity = s.signature.predicate_arity(name).or(s.signature.function_arity(name)).expect("declared");
                let tuple: Vec<&str> = s.decode(i, arity).into_iter().map(|e| s.universe[e].as_str()).collect();
                return Err(Error::InvalidStructure(format!("`{name}` has no entry for ({})", tuple.join(","))));
            }
        }
        Ok(s)
    }

    fn index_of_ids(&self, name: &str, args: &[String], arity: Option<usize>) -> Result<usize> {
        let arity = arity.expect("declared");
        if args.len() != arity {
            return Err(Error::ArityMismatch { symbol: name.into(), expected: arity, found: args.len() });
        }
        let idx: Vec<usize> = args.iter().map(|a| self.element(a)).collect::<Result<_>>()?;
        Ok(self.encode(&idx))
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Position of an element id.
    pub fn element(&self, id: &str) -> Result<usize> {
        self.universe
            .iter()
            .position(|e| e == id)
            .ok_or_else(|| Error::InvalidStructure(format!("`{id}` is not in the universe")))
    }

    fn table_len(&self, arity: usize) -> usize {
        self.size().pow(arity as u32)
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &e| acc * self.size() + e)
    }

    pub fn decode(&self, mut index: usize, arity: usize) -> Vec<usize> {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = index % self.size();
            index /= self.size();
        }
        out
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize, fill: TruthValue) -> Result<()> {
        self.signature.add_predicate(name, arity)?;
        let len = self.table_len(arity);
        self.predicates.insert(name.into(), vec![fill; len]);
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, arity: usize, fill: usize) -> Result<()> {
        if fill >= self.size() {
            return Err(Error::InvalidStructure(format!("element index {fill} is out of range")));
        }
        self.signature.add_function(name, arity)?;
        let len = self.table_len(arity);
        self.functions.insert(name.into(), vec![fill; len]);
        Ok(())
    }

    pub fn set_predicate(&mut self, name: &str, tuple: &[usize], value: TruthValue) -> Result<()> {
        let idx = self.checked_index(name, tuple, self.signature.predicate_arity(name))?;
        self.predicates.get_mut(name).expect("declared")[idx] = value;
        Ok(())
    }

    pub fn set_function(&mut self, name: &str, tuple: &[usize], target: usize) -> Result<()> {
        if target >= self.size() {
            return Err(Error::InvalidStructure(format!("element index {target} is out of range")));
        }
        let idx = self.checked_index(name, tuple, self.signature.function_arity(name))?;
        self.functions.get_mut(name).expect("declared")[idx] = target;
        Ok(())
    }

    fn checked_index(&self, name: &str, tuple: &[usize], arity: Option<usize>) -> Result<usize> {
        let arity = arity.ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        if tuple.len() != arity {
            return Err(Error::ArityMismatch { symbol: name.into(), expected: arity, found: tuple.len() });
        }
        if tuple.iter().any(|&e| e >= self.size()) {
            return Err(Error::InvalidStructure(format!("tuple for `{name}` leaves the universe")));
        }
        Ok(self.encode(tuple))
    }

    pub fn predicate_value(&self, name: &str, tuple: &[usize]) -> Result<&TruthValue> {
        let idx = self.checked_index(name, tuple, self.signature.predicate_arity(name))?;
        Ok(&self.predicates[name][idx])
    }

    pub fn function_value(&self, name: &str, tuple: &[usize]) -> Result<usize> {
        let idx = self.checked_index(name, tuple, self.signature.function_arity(name))?;
        Ok(self.functions[name][idx])
    }

    /// The whole table of a predicate, in tuple-index order.
    pub fn predicate_table(&self, name: &str) -> Option<&[TruthValue]> {
        self.predicates.get(name).map(Vec::as_slice)
    }

    pub fn function_table(&self, name: &str) -> Option<&[usize]> {
        self.functions.get(name).map(Vec::as_slice)
    }

    /// Every value occurring in a predicate table.
    pub fn values(&self) -> impl Iterator<Item = &TruthValue> {
        self.predicates.values().flatten()
    }

    fn term(&self, t: &Term, env: &[(&str, usize)]) -> Result<usize> {
        match t {
            Term::Var(v) => match env.iter().rev().find(|(n, _)| *n == v) {
                Some((_, e)) => Ok(*e),
                None if self.signature.function_arity(v) == Some(0) => self.function_value(v, &[]),
                None => Err(Error::UnboundVariable(v.clone())),
            },
            Term::Const(c) => self.function_value(c, &[]),
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect::<Result<_>>()?;
                self.function_value(f, &vals)
            }
        }
    }
}

/// Value of `f` with free variables bound by `env`.
pub fn interpret(sem: SemanticsMode, a: Algebra, s: &FiniteStructure, f: &Formula, env: &Assignment) -> Result<TruthValue> {
    let env: Vec<(String, usize)> = env.iter().map(|(v, e)| Ok((v.clone(), s.element(e)?))).collect::<Result<_>>()?;
    interpret_indexed(sem, a, s, f, &env)
}

/// As [`interpret`], with elements given by index. Later bindings shadow earlier ones.
pub fn interpret_indexed(sem: SemanticsMode, a: Algebra, s: &FiniteStructure, f: &Formula, env: &[(String, usize)]) -> Result<TruthValue> {
    let mut env: Vec<(&str, usize)> = env.iter().map(|(v, e)| (v.as_str(), *e)).collect();
    eval(&Connectives::new(sem, a), s, f, &mut env)
}

fn eval<'a>(c: &Connectives, s: &FiniteStructure, f: &'a Formula, env: &mut Vec<(&'a str, usize)>) -> Result<TruthValue> {
    use Formula::*;
    Ok(match f {
        Atom(p) => s.predicate_value(p, &[])?.clone(),
        Pred(p, args) => {
            let arity = s.signature.predicate_arity(p).ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
            if arity != args.len() {
                return Err(Error::ArityMismatch { symbol: p.clone(), expected: arity, found: args.len() });
            }
            let vals: Vec<usize> = args.iter().map(|t| s.term(t, env)).collect::<Result<_>>()?;
            s.predicate_value(p, &vals)?.clone()
        }
        Bottom => c.bottom(),
        Top => c.top(),
        Strong(x, y) => c.strong(&eval(c, s, x, env)?, &eval(c, s, y, env)?),
        Implies(x, y) => c.implies(&eval(c, s, x, env)?, &eval(c, s, y, env)?),
        And(x, y) => c.and(&eval(c, s, x, env)?, &eval(c, s, y, env)?),
        Or(x, y) => c.or(&eval(c, s, x, env)?, &eval(c, s, y, env)?),
        Iff(x, y) => c.iff(&eval(c, s, x, env)?, &eval(c, s, y, env)?),
        Not(x) => c.not(&eval(c, s, x, env)?),
        StrongPow(x, n) => c.pow(&eval(c, s, x, env)?, *n),
        Forall(v, body) | Exists(v, body) => {
            let universal = matches!(f, Forall(..));
            let mut acc = if universal { c.top() } else { c.bottom() };
            for e in 0..s.size() {
                env.push((v.as_str(), e));
                let x = eval(c, s, body, env);
                env.pop();
                let x = x?;
                acc = if universal { c.and(&acc, &x) } else { c.or(&acc, &x) };
            }
            acc
        }
    })
}

/// Either kind of structure, for [`check_theory`].
#[derive(Debug, Clone, Copy)]
pub enum StructureRef<'a> {
    Finite(&'a FiniteStructure),
    Omega(&'a OmegaStructure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceReport {
    pub formula: Formula,
    pub value: TruthValue,
    pub designated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryReport {
    pub sentences: Vec<SentenceReport>,
    /// Every sentence takes the designated value.
    pub models: bool,
}

/// Evaluates every sentence of `t` in `s`.
///
/// ω-structures are evaluated in standard semantics only.
pub fn check_theory(s: StructureRef<'_>, a: Algebra, sem: SemanticsMode, t: &Theory) -> Result<TheoryReport> {
    t.check_sentences()?;
    let mut sentences = Vec::with_capacity(t.len());
    for f in &t.formulas {
        let value = match s {
            StructureRef::Finite(m) => interpret_indexed(sem, a, m, f, &[])?,
            StructureRef::Omega(m) => {
                if sem != SemanticsMode::Standard {
                    return Err(Error::Unsupported("omega structures are evaluated in standard semantics".into()));
                }
                omega_interpret(a, m, f)?
            }
        };
        let designated = sem.is_designated(&value);
        sentences.push(SentenceReport { formula: f.clone(), value, designated });
    }
    let models = sentences.iter().all(|r| r.designated);
    Ok(TheoryReport { sentences, models })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_formula_with, ParseOptions};
    use alloc::string::ToString;

    fn tv(n: i64, d: i64) -> TruthValue {
        TruthValue::ratio(n, d).unwrap()
    }

    fn two_element() -> FiniteStructure {
        let entries = [
            ("R".to_string(), vec!["a".to_string()], tv(1, 3)),
            ("R".to_string(), vec!["b".to_string()], tv(2, 3)),
        ];
        FiniteStructure::from_entries(vec!["a".into(), "b".into()], &entries, &[]).unwrap()
    }

    fn value(sem: SemanticsMode, s: &FiniteStructure, text: &str) -> TruthValue {
        interpret(sem, Algebra::Godel, s, &parse_formula(text).unwrap(), &Assignment::new()).unwrap()
    }

    #[test]
    fn quantifiers_are_min_and_max() {
        let s = two_element();
        assert_eq!(value(SemanticsMode::Standard, &s, "forall x. R(x)"), tv(1, 3));
        assert_eq!(value(SemanticsMode::Standard, &s, "exists x. R(x)"), tv(2, 3));
        assert_eq!(value(SemanticsMode::Metric, &s, "forall x. R(x)"), tv(2, 3));
        assert_eq!(value(SemanticsMode::Metric, &s, "exists x. R(x)"), tv(1, 3));
    }

    #[test]
    fn functions_constants_and_errors() {
        let mut s = two_element();
        s.declare_function("f", 1, 0).unwrap();
        s.set_function("f", &[0], 1).unwrap();
        s.declare_function("c", 0, 0).unwrap();
        assert_eq!(value(SemanticsMode::Standard, &s, "R(f(c))"), tv(2, 3));
        let opts = ParseOptions { strict: true, constants: ["c".to_string()].into_iter().collect() };
        let f = parse_formula_with("forall x. R(f(x)) -> R(c)", &opts).unwrap();
        assert_eq!(interpret(SemanticsMode::Standard, Algebra::Godel, &s, &f, &Assignment::new()).unwrap(), tv(1, 1));
        let err = |t: &str| interpret(SemanticsMode::Standard, Algebra::Godel, &s, &parse_formula(t).unwrap(), &Assignment::new());
        assert!(matches!(err("S(c)"), Err(Error::UnknownSymbol(_))));
        assert!(matches!(err("R(c, c)"), Err(Error::ArityMismatch { .. })));
        assert!(matches!(err("R(y)"), Err(Error::UnboundVariable(_))));
        let mut env = Assignment::new();
        env.insert("y".into(), "b".into());
        let f = parse_formula("R(y)").unwrap();
        assert_eq!(interpret(SemanticsMode::Standard, Algebra::Godel, &s, &f, &env).unwrap(), tv(2, 3));
        assert!(s.declare_predicate("f", 1, tv(0, 1)).is_err());
    }

    #[test]
    fn totality_is_enforced() {
        let entries = [("R".to_string(), vec!["a".to_string()], tv(1, 3))];
        let err = FiniteStructure::from_entries(vec!["a".into(), "b".into()], &entries, &[]).unwrap_err();
        assert!(err.to_string().contains("(b)"), "{err}");
        assert!(FiniteStructure::new(vec![]).is_err());
        assert!(FiniteStructure::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn theory_reports() {
        let mut s = FiniteStructure::new(vec!["a".into(), "b".into()]).unwrap();
        s.declare_predicate("R", 1, tv(1, 2)).unwrap();
        let t = Theory::new("t", vec![parse_formula("forall x. R(x)").unwrap()]);
        let r = check_theory(StructureRef::Finite(&s), Algebra::Godel, SemanticsMode::Standard, &t).unwrap();
        assert_eq!(r.sentences[0].value, tv(1, 2));
        assert!(!r.models);
        let empty = Theory::new("empty", vec![]);
        assert!(check_theory(StructureRef::Finite(&s), Algebra::Godel, SemanticsMode::Standard, &empty).unwrap().models);
        let open = Theory::new("open", vec![parse_formula("R(x)").unwrap()]);
        assert!(check_theory(StructureRef::Finite(&s), Algebra::Godel, SemanticsMode::Standard, &open).is_err());
    }
}
