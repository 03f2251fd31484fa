//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*                 left-associative
//! imp     := or ["->" imp]                    right-associative
//! or      := and ("\/" and)*
//! and     := strg ("/\" strg)*
//! strg    := unary ("&" unary)*
//! unary   := "~" unary | "(" formula ")" | "0" | "1"
//!          | ("forall" | "exists") IDENT "." unary
//!          | IDENT ["(" term ("," term)* ")"] ["^" NAT]
//! term    := IDENT ["(" term ("," term)* ")"]
//! ```

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    BadExponent(String),
    UnboundVariable(String),
}

/// Parse failure at a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: ", self.column)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::BadExponent(e) => write!(f, "exponent `{e}` must be a natural number >= 1"),
            ParseErrorKind::UnboundVariable(v) => write!(f, "variable `{v}` is not bound by a quantifier"),
        }
    }
}

impl core::error::Error for ParseError {}

/// How identifiers in term position are resolved.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Reject term identifiers that are neither bound nor declared constants.
    pub strict: bool,
    /// Identifiers that denote constants rather than free variables.
    pub constants: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Caret,
    Tilde,
    Amp,
    Wedge,
    Vee,
    Arrow,
    DoubleArrow,
    Forall,
    Exists,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Nat(s) => s.clone(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Dot => ".".into(),
            Tok::Caret => "^".into(),
            Tok::Tilde => "~".into(),
            Tok::Amp => "&".into(),
            Tok::Wedge => "/\\".into(),
            Tok::Vee => "\\/".into(),
            Tok::Arrow => "->".into(),
            Tok::DoubleArrow => "<->".into(),
            Tok::Forall => "forall".into(),
            Tok::Exists => "exists".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let err = |c: char| ParseError { column: col, kind: ParseErrorKind::UnexpectedChar(c) };
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '^' => (Tok::Caret, 1),
            '~' => (Tok::Tilde, 1),
            '&' => (Tok::Amp, 1),
            '/' if next == Some('\\') => (Tok::Wedge, 2),
            '\\' if next == Some('/') => (Tok::Vee, 2),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => (Tok::DoubleArrow, 3),
            _ if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                (Tok::Nat(chars[i..i + len].iter().collect()), len)
            }
            _ if c.is_alphabetic() || c == '_' => {
                let len = chars[i..].iter().take_while(|c| c.is_alphanumeric() || **c == '_').count();
                let word: String = chars[i..i + len].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                };
                (tok, len)
            }
            _ => return Err(err(c)),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    bound: Vec<String>,
    opts: &'a ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error_here(&self) -> ParseError {
        let kind = match self.peek() {
            Some(t) => ParseErrorKind::UnexpectedToken(t.text()),
            None => ParseErrorKind::UnexpectedEnd,
        };
        ParseError { column: self.column(), kind }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error_here())
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error_here()),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::DoubleArrow) {
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Vee) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.strong()?;
        while self.eat(&Tok::Wedge) {
            lhs = Formula::and(lhs, self.strong()?);
        }
        Ok(lhs)
    }

    fn strong(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            lhs = Formula::strong(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Nat(n)) if n == "0" => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Tok::Nat(n)) if n == "1" => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(q @ (Tok::Forall | Tok::Exists)) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(&Tok::Dot)?;
                self.bound.push(var.clone());
                let body = self.unary();
                self.bound.pop();
                let body = Box::new(body?);
                Ok(if q == Tok::Forall { Formula::Forall(var, body) } else { Formula::Exists(var, body) })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let base = if self.peek() == Some(&Tok::LParen) {
                    Formula::Pred(name, self.args()?)
                } else {
                    Formula::Atom(name)
                };
                if self.eat(&Tok::Caret) {
                    let exp_col = self.column();
                    match self.peek().cloned() {
                        Some(Tok::Nat(n)) => {
                            self.pos += 1;
                            match n.parse::<u32>() {
                                Ok(k) if k >= 1 => Ok(Formula::StrongPow(Box::new(base), k)),
                                _ => Err(ParseError { column: exp_col, kind: ParseErrorKind::BadExponent(n) }),
                            }
                        }
                        _ => Err(self.error_here()),
                    }
                } else {
                    Ok(base)
                }
            }
            _ => Err(self.error_here()),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut args = alloc::vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let col = self.column();
        let name = self.ident()?;
        if self.peek() == Some(&Tok::LParen) {
            return Ok(Term::App(name, self.args()?));
        }
        if self.bound.contains(&name) {
            Ok(Term::Var(name))
        } else if self.opts.constants.contains(&name) {
            Ok(Term::Const(name))
        } else if self.opts.strict {
            Err(ParseError { column: col, kind: ParseErrorKind::UnboundVariable(name) })
        } else {
            Ok(Term::Var(name))
        }
    }
}

/// Parses with default options: unbound term identifiers become free variables.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &ParseOptions::default())
}

pub fn parse_formula_with(text: &str, opts: &ParseOptions) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end_col: text.chars().count() + 1, bound: Vec::new(), opts };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.error_here());
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn precedence_and_associativity() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        let r = Formula::atom("r");
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::implies(p.clone(), Formula::implies(q.clone(), r.clone()))
        );
        assert_eq!(
            parse_formula("p <-> q <-> r").unwrap(),
            Formula::iff(Formula::iff(p.clone(), q.clone()), r.clone())
        );
        assert_eq!(
            parse_formula("p & q /\\ r").unwrap(),
            Formula::and(Formula::strong(p.clone(), q.clone()), r.clone())
        );
        assert_eq!(
            parse_formula("~p \\/ q -> r").unwrap(),
            Formula::implies(Formula::or(Formula::not(p.clone()), q.clone()), r)
        );
        assert_eq!(parse_formula("  p&q ").unwrap(), parse_formula("p & q").unwrap());
    }

    #[test]
    fn constants_and_quantifiers() {
        assert_eq!(parse_formula("~0").unwrap(), Formula::not(Formula::Bottom));
        assert_eq!(parse_formula("~0").unwrap().desugar(), Formula::Top.desugar());
        let f = parse_formula("forall x. (R(x) -> s(x))").unwrap();
        assert_eq!(f, Formula::forall("x", Formula::implies(Formula::unary("R", "x"), Formula::unary("s", "x"))));
        let g = parse_formula("forall x. R(x) -> s(x)").unwrap();
        assert!(matches!(g, Formula::Implies(..)));
        assert_eq!(
            parse_formula("rho(x)^3").unwrap(),
            Formula::pow(Formula::unary("rho", "x"), 3)
        );
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_formula("p -> ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(e.column, 6);
        let e = parse_formula("p $ q").unwrap_err();
        assert_eq!((e.column, e.kind), (3, ParseErrorKind::UnexpectedChar('$')));
        let e = parse_formula("p q").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_formula("p^0").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadExponent(_)));
        let e = parse_formula("(p").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert!(parse_formula("2").is_err());
        assert!(parse_formula("forall . p").is_err());
    }

    #[test]
    fn strict_mode() {
        let opts = ParseOptions { strict: true, ..Default::default() };
        let e = parse_formula_with("forall x. R(x, y)", &opts).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnboundVariable("y".into()));
        assert_eq!(e.column, 16);
        let mut opts = opts;
        opts.constants.insert("c".into());
        let f = parse_formula_with("forall x. R(x, c)", &opts).unwrap();
        assert!(f.is_sentence());
        assert!(parse_formula("R(y)").unwrap().free_vars().contains("y"));
    }

    #[test]
    fn round_trip_examples() {
        for text in ["p -> q -> r", "p & q", "forall x. ~R(x)", "(p -> q) -> r", "exists y. (R(y) & 1) <-> 0"] {
            let f = parse_formula(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
