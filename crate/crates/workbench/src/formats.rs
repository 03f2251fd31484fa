//! Line-oriented text formats for theories, structures, filters, truth-value
//! sets and assignments.
//!
//! Every format ignores blank lines and lines starting with `#`. Each reader
//! has a matching writer whose output reads back to an equal value.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use tnorm_core::{
    parse_formula_with, Evaluation, FilterDesc, FiniteStructure, GodelSet, KDescriptor, OmegaStructure, ParseOptions, SequenceExpr, Theory, TruthValue,
};

/// A malformed input file or flag value, with its 1-based line when known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Other(String),
}

fn at(line: usize, message: impl std::fmt::Display) -> FormatError {
    FormatError::Line { line, message: message.to_string() }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_theory(name: &str, text: &str) -> Result<Theory, FormatError> {
    parse_theory_with(name, text, &ParseOptions::default())
}

/// As [`parse_theory`], with explicit parser options such as declared constants.
pub fn parse_theory_with(name: &str, text: &str, opts: &ParseOptions) -> Result<Theory, FormatError> {
    let formulas = content_lines(text).map(|(n, l)| parse_formula_with(l, opts).map_err(|e| at(n, e))).collect::<Result<_, _>>()?;
    Ok(Theory::new(name, formulas))
}

pub fn render_theory(t: &Theory) -> String {
    t.to_string()
}

/// The two kinds of structure file.
#[derive(Debug, Clone)]
pub enum StructureFile {
    Finite(FiniteStructure),
    Omega(OmegaStructure),
}

pub fn parse_structure(text: &str) -> Result<StructureFile, FormatError> {
    let mut lines = content_lines(text).peekable();
    match lines.peek() {
        Some((_, "omega")) => {
            lines.next();
            parse_omega(lines).map(StructureFile::Omega)
        }
        Some(_) => parse_finite(lines).map(StructureFile::Finite),
        None => Err(FormatError::Other("empty structure file".into())),
    }
}

/// Splits `pred R a b = 1/3` into `("R", ["a","b"], "1/3")` after the keyword.
fn entry(rest: &str, line: usize) -> Result<(String, Vec<String>, String), FormatError> {
    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| at(line, "expected `=`"))?;
    let mut words = lhs.split_whitespace().map(str::to_string);
    let name = words.next().ok_or_else(|| at(line, "missing symbol name"))?;
    let rhs = rhs.trim();
    if rhs.is_empty() {
        return Err(at(line, "missing value after `=`"));
    }
    Ok((name, words.collect(), rhs.to_string()))
}

fn parse_finite<'a>(mut lines: impl Iterator<Item = (usize, &'a str)>) -> Result<FiniteStructure, FormatError> {
    let (n, first) = lines.next().expect("peeked");
    let universe: Vec<String> = match first.strip_prefix("universe") {
        Some(rest) if rest.starts_with(char::is_whitespace) => rest.split_whitespace().map(str::to_string).collect(),
        _ => return Err(at(n, "a finite structure file starts with `universe`")),
    };
    let mut preds = Vec::new();
    let mut funs = Vec::new();
    for (n, l) in lines {
        let (kw, rest) = l.split_once(char::is_whitespace).ok_or_else(|| at(n, "expected `pred` or `fun`"))?;
        let (name, args, value) = entry(rest, n)?;
        match kw {
            "pred" => preds.push((name, args, value.parse::<TruthValue>().map_err(|e| at(n, e))?)),
            "fun" => funs.push((name, args, value)),
            other => return Err(at(n, format!("unknown keyword `{other}`"))),
        }
    }
    FiniteStructure::from_entries(universe, &preds, &funs).map_err(|e| FormatError::Other(e.to_string()))
}

fn parse_omega<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<OmegaStructure, FormatError> {
    let mut s = OmegaStructure::new();
    for (n, l) in lines {
        if let Some(k) = l.strip_prefix("kmax") {
            let k: u64 = k.trim().parse().map_err(|_| at(n, "kmax needs a positive integer"))?;
            s = s.with_kmax(k);
            continue;
        }
        let rest = l.strip_prefix("pred").filter(|r| r.starts_with(char::is_whitespace)).ok_or_else(|| at(n, "expected `pred`"))?;
        let (name, args, value) = entry(rest, n)?;
        if !args.is_empty() {
            return Err(at(n, "omega predicates are unary and take no element arguments"));
        }
        let seq: SequenceExpr = value.parse().map_err(|e| at(n, e))?;
        if s.insert(&name, seq).is_some() {
            return Err(at(n, format!("`{name}` is defined twice")));
        }
    }
    Ok(s)
}

pub fn render_structure(s: &FiniteStructure) -> String {
    let mut out = format!("universe {}\n", s.universe().join(" "));
    let ids = |tuple: Vec<usize>| tuple.into_iter().map(|e| format!(" {}", s.universe()[e])).collect::<String>();
    for (name, &arity) in s.signature().predicates() {
        let table = s.predicate_table(name).expect("declared");
        for (i, v) in table.iter().enumerate() {
            writeln!(out, "pred {name}{} = {v}", ids(s.decode(i, arity))).expect("string write");
        }
    }
    for (name, &arity) in s.signature().functions() {
        let table = s.function_table(name).expect("declared");
        for (i, &t) in table.iter().enumerate() {
            writeln!(out, "fun {name}{} = {}", ids(s.decode(i, arity)), s.universe()[t]).expect("string write");
        }
    }
    out
}

pub fn render_omega(s: &OmegaStructure) -> String {
    let mut out = String::from("omega\n");
    if s.kmax != OmegaStructure::new().kmax {
        writeln!(out, "kmax {}", s.kmax).expect("string write");
    }
    for (name, seq) in s.predicates() {
        writeln!(out, "pred {name} = {seq}").expect("string write");
    }
    out
}

/// `{1,2},{1,2,3}` into label lists.
fn parse_sets(text: &str, line: usize) -> Result<Vec<Vec<u32>>, FormatError> {
    let mut sets = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('{').ok_or_else(|| at(line, "expected `{`"))?;
        let (inner, tail) = body.split_once('}').ok_or_else(|| at(line, "unclosed `{`"))?;
        let labels = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>().map_err(|_| at(line, format!("bad index label `{s}`"))))
            .collect::<Result<_, _>>()?;
        sets.push(labels);
        rest = tail.trim_start().strip_prefix(',').unwrap_or(tail).trim_start();
    }
    Ok(sets)
}

pub fn parse_filter(text: &str) -> Result<FilterDesc, FormatError> {
    let mut index: Option<Vec<u32>> = None;
    let mut body: Option<(usize, &str)> = None;
    for (n, l) in content_lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "index" => {
                let labels = rest.split_whitespace().map(|s| s.parse::<u32>().map_err(|_| at(n, format!("bad index label `{s}`"))));
                index = Some(labels.collect::<Result<_, _>>()?);
            }
            "principal" | "sets" if body.is_none() => body = Some((n, l)),
            "principal" | "sets" => return Err(at(n, "only one `principal` or `sets` line is allowed")),
            other => return Err(at(n, format!("unknown keyword `{other}`"))),
        }
    }
    let index = index.ok_or_else(|| FormatError::Other("filter file has no `index` line".into()))?;
    let (n, line) = body.ok_or_else(|| FormatError::Other("filter file needs a `principal` or `sets` line".into()))?;
    let core_err = |e: tnorm_core::Error| at(n, e);
    if let Some(label) = line.strip_prefix("principal") {
        let label = label.trim().parse::<u32>().map_err(|_| at(n, "principal needs one index label"))?;
        FilterDesc::principal(index, label).map_err(core_err)
    } else {
        let sets = parse_sets(line.strip_prefix("sets").expect("keyword"), n)?;
        FilterDesc::explicit(index, &sets).map_err(core_err)
    }
}

pub fn render_filter(f: &FilterDesc) -> Result<String, FormatError> {
    let labels = |ls: &[u32]| ls.iter().map(u32::to_string).collect::<Vec<_>>();
    match f {
        FilterDesc::Principal { index, at } => Ok(format!("index {}\nprincipal {}\n", labels(index).join(" "), index[*at])),
        FilterDesc::Explicit { index, sets } => {
            let sets: Vec<String> = sets
                .iter()
                .map(|m| format!("{{{}}}", labels(&index.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, l)| *l).collect::<Vec<_>>()).join(",")))
                .collect();
            Ok(format!("index {}\nsets {}\n", labels(index).join(" "), sets.join(",")))
        }
        FilterDesc::ConvergentTail => Err(FormatError::Other("the symbolic tail ultrafilter has no file form".into())),
    }
}

/// A Gödel set file holds one truth-value descriptor, possibly spread over several lines.
pub fn parse_godel_set(text: &str) -> Result<GodelSet, FormatError> {
    let joined: Vec<&str> = content_lines(text).map(|(_, l)| l).collect();
    let d: KDescriptor = joined.join(" ").parse().map_err(|e: tnorm_core::Error| FormatError::Other(e.to_string()))?;
    GodelSet::new(d).map_err(|e| FormatError::Other(e.to_string()))
}

/// The finite Gödel set of every value used by `structures`, with 0 and 1.
pub fn value_closure<'a>(structures: impl IntoIterator<Item = &'a FiniteStructure>) -> GodelSet {
    let mut vs: BTreeSet<TruthValue> = structures.into_iter().flat_map(|m| m.values().cloned()).collect();
    vs.insert(TruthValue::zero());
    vs.insert(TruthValue::one());
    GodelSet::finite(vs)
}

/// `p=1/2,q=3/4`, also accepting whitespace around separators.
pub fn parse_assignment(text: &str) -> Result<Evaluation, FormatError> {
    let mut v = Evaluation::new();
    for (name, value) in parse_pairs(text)? {
        let x: TruthValue = value.parse().map_err(|e: tnorm_core::Error| FormatError::Other(format!("`{name}`: {e}")))?;
        v.insert(&name, x);
    }
    Ok(v)
}

/// `x=a,y=b` as raw name/value pairs; duplicate names are rejected.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, FormatError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| FormatError::Other(format!("expected name=value, found `{part}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(FormatError::Other(format!("expected name=value, found `{part}`")));
        }
        if out.iter().any(|(n, _)| n == k) {
            return Err(FormatError::Other(format!("`{k}` is assigned twice")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}
