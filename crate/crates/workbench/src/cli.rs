//! The `tnw` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code: 0 on success, 1 when the answer is "unsatisfiable" or "does not
//! model", 2 on usage and input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tnorm_core::audit::{algebra_laws, oracle_agreement, AuditReport};
use tnorm_core::axioms::{axiom_validity_audit, semantic_duality_audit};
use tnorm_core::fo::{interpret_indexed, SentenceReport};
use tnorm_core::generate::single_quantifier_formulas;
use tnorm_core::ksat::{status_name, DEFAULT_SEARCH_BUDGET};
use tnorm_core::metric::{equivalence_audit, lipschitz_audit, metric_axioms_audit, pair_metric_audit, LipschitzOp};
use tnorm_core::repro::{godelf_theory, godelf_witness, prodf_candidates, prodf_theory, small_model_search};
use tnorm_core::ultra::los_check_in;
use tnorm_core::{
    chain_theory, check_theory, classical_bridge, compact_in_dg, compactness_demo, dpi_open_ball, evaluate, ksat_godel_exact,
    ksat_search, metric_d, metric_dd, omega_interpret, parse_formula_with, ultraproduct, Algebra, Budget, FiniteStructure, Formula,
    GodelSet, KDescriptor, KSet, KsatResult, KsatStatus, OmegaStructure, ParseOptions, SemanticsMode, StructureRef, Theory,
    TheoryReport, TruthValue,
};

use crate::formats::{
    parse_assignment, parse_filter, parse_godel_set, parse_pairs, parse_structure, parse_theory_with, render_filter, render_omega,
    render_structure, render_theory, value_closure, StructureFile,
};
use crate::heatmap::write_heatmap;

#[derive(Parser, Debug)]
#[command(name = "tnw", version, about = "Exact workbench for t-norm based many-valued logics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, default_value = "godel", value_parser = parse_algebra)]
    logic: Algebra,
    #[arg(long, global = true, default_value = "standard", value_parser = parse_semantics)]
    semantics: SemanticsMode,
    /// Target set, e.g. `[0,1/2) u {3/4}`.
    #[arg(long = "K", global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    theory: Option<PathBuf>,
    /// Structure file; repeat for several factors.
    #[arg(long, global = true)]
    structure: Vec<PathBuf>,
    #[arg(long, global = true)]
    filter: Option<PathBuf>,
    /// Grid size.
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true)]
    resolution: Option<u32>,
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    formula: Option<String>,
    /// `p=1/2,q=3/4` for atoms, or `x=a,y=b` for free variables.
    #[arg(long, global = true)]
    assign: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and render formulas with their desugared core forms.
    Parse,
    /// Evaluate propositional formulas under an assignment.
    Eval,
    /// Decide or search K-satisfiability of a propositional theory.
    Ksat {
        /// Use the exact order-abstraction solver (Gödel only).
        #[arg(long)]
        exact: bool,
    },
    /// Decide K-satisfiability via classical satisfiability (Gödel and product).
    Bridge,
    /// Distances, open balls of d_π and compactness in d_G.
    Metric(MetricArgs),
    /// Run exhaustive and seeded audits.
    Audit(AuditArgs),
    /// Write the CSV heatmap of d on the 1/n grid.
    Heatmap,
    /// Evaluate formulas or a theory in a finite or ω-structure.
    StructureEval,
    /// Reproduce the example theories.
    Repro(ReproArgs),
    /// Build the ultraproduct of finite structures.
    Ultraproduct(UltraArgs),
    /// Compare formula values in an ultraproduct with limits of factor values.
    Los(UltraArgs),
    /// Assemble a model of a finite theory from models of its subsets.
    CompactnessDemo(CompactArgs),
}

#[derive(Args, Debug)]
struct MetricArgs {
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Second coordinates; with --x2 and --y2 the pair metric is computed.
    #[arg(long)]
    x2: Option<String>,
    #[arg(long)]
    y2: Option<String>,
    /// Open ball of d_π as `center,radius`.
    #[arg(long)]
    ball: Option<String>,
    /// Truth-value descriptor to test for compactness in d_G.
    #[arg(long)]
    compact: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AuditKind {
    Laws,
    Oracle,
    Metric,
    Pairs,
    Lipschitz,
    Equivalence,
    Axioms,
    Duality,
    All,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long, value_enum, default_value = "all")]
    which: AuditKind,
    /// Random instances for the seeded audits.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Example {
    Godelf,
    Prodf,
    Chain,
}

#[derive(Args, Debug)]
struct ReproArgs {
    #[arg(long, value_enum)]
    example: Example,
    #[arg(long = "with-witness")]
    with_witness: bool,
}

#[derive(Args, Debug)]
struct UltraArgs {
    /// Gödel set file; defaults to the factor values with 0 and 1.
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long = "max-index")]
    max_index: Option<usize>,
    #[arg(long = "max-factor")]
    max_factor: Option<usize>,
}

#[derive(Args, Debug)]
struct CompactArgs {
    /// Largest universe tried when searching for a subset model.
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long = "max-index")]
    max_index: Option<usize>,
}

fn parse_algebra(s: &str) -> Result<Algebra, String> {
    s.parse().map_err(|_| format!("unknown logic `{s}` (expected lukasiewicz, godel or product)"))
}

fn parse_semantics(s: &str) -> Result<SemanticsMode, String> {
    s.parse().map_err(|_| format!("unknown semantics `{s}` (expected standard or metric)"))
}

/// A usage or input error, reported with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

/// Runs one command. `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        2
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
            return code;
        }
    };
    let mut ctx = Ctx { g: &cli.global, out };
    match ctx.dispatch(&cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

struct Ctx<'a> {
    g: &'a Global,
    out: &'a mut dyn Write,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn value(s: &str, what: &str) -> Result<TruthValue, Failure> {
    s.parse().map_err(|e| Failure(format!("--{what}: {e}")))
}

fn truth_json(v: &TruthValue) -> Value {
    Value::String(v.to_string())
}

fn report_json(r: &AuditReport) -> Value {
    json!({
        "name": r.name,
        "checked": r.checked,
        "violations": r.violation_count,
        "witnesses": r.violations,
        "max_deviation": r.max_deviation.as_ref().map(|d| d.to_string()),
        "passed": r.passed(),
    })
}

fn sentences_json(rs: &[SentenceReport]) -> Value {
    Value::Array(rs.iter().map(|s| json!({"formula": s.formula.to_string(), "value": truth_json(&s.value), "designated": s.designated})).collect())
}

impl Ctx<'_> {
    fn dispatch(&mut self, c: &Command) -> Outcome {
        match c {
            Command::Parse => self.parse(),
            Command::Eval => self.eval(),
            Command::Ksat { exact } => self.ksat(*exact),
            Command::Bridge => self.bridge(),
            Command::Metric(m) => self.metric(m),
            Command::Audit(a) => self.audit(a),
            Command::Heatmap => self.heatmap(),
            Command::StructureEval => self.structure_eval(),
            Command::Repro(r) => self.repro(r),
            Command::Ultraproduct(u) => self.ultraproduct(u),
            Command::Los(u) => self.los(u),
            Command::CompactnessDemo(c) => self.compactness(c),
        }
    }

    fn emit_json(&mut self, v: Value) -> Result<(), Failure> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(&v)?)?;
        Ok(())
    }

    fn line(&mut self, s: impl std::fmt::Display) -> Result<(), Failure> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    /// Formulas from `--formula` or `--theory`, whichever is given.
    fn formulas(&self, opts: &ParseOptions) -> Result<Theory, Failure> {
        match (&self.g.formula, &self.g.theory) {
            (Some(f), None) => Ok(Theory::new("formula", vec![parse_formula_with(f, opts)?])),
            (None, Some(path)) => self.theory_at(path, opts),
            (Some(_), Some(_)) => fail("give either --formula or --theory, not both"),
            (None, None) => fail("missing --formula or --theory"),
        }
    }

    fn theory_at(&self, path: &Path, opts: &ParseOptions) -> Result<Theory, Failure> {
        let name = path.file_stem().map_or("theory".into(), |s| s.to_string_lossy().into_owned());
        parse_theory_with(&name, &read(path)?, opts).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    fn theory(&self) -> Result<Theory, Failure> {
        self.formulas(&ParseOptions::default())
    }

    fn kset(&self) -> Result<KSet, Failure> {
        let text = self.g.k.as_deref().ok_or_else(|| Failure("missing --K".into()))?;
        text.parse().map_err(|e| Failure(format!("--K: {e}")))
    }

    fn parse(&mut self) -> Outcome {
        let t = self.formulas(&ParseOptions::default())?;
        if self.g.json {
            let items: Vec<Value> = t
                .formulas
                .iter()
                .map(|f| {
                    json!({
                        "formula": f.to_string(),
                        "desugared": f.desugar().to_string(),
                        "depth": f.depth(),
                        "free_variables": f.free_vars(),
                    })
                })
                .collect();
            self.emit_json(Value::Array(items))?;
        } else {
            for f in &t.formulas {
                self.line(format!("{f}\n  core: {}", f.desugar()))?;
            }
        }
        Ok(true)
    }

    fn eval(&mut self) -> Outcome {
        let t = self.formulas(&ParseOptions::default())?;
        let v = parse_assignment(self.g.assign.as_deref().unwrap_or(""))?;
        let (sem, a) = (self.g.semantics, self.g.logic);
        let values: Vec<TruthValue> = t.formulas.iter().map(|f| evaluate(sem, a, f, &v)).collect::<Result<_, _>>()?;
        if self.g.json {
            let items: Vec<Value> = t.formulas.iter().zip(&values).map(|(f, x)| json!({"formula": f.to_string(), "value": truth_json(x)})).collect();
            self.emit_json(json!({"logic": a.name(), "semantics": sem.name(), "assignment": v.to_string(), "results": items}))?;
        } else if values.len() == 1 && self.g.formula.is_some() {
            self.line(&values[0])?;
        } else {
            for (f, x) in t.formulas.iter().zip(&values) {
                self.line(format!("{x}\t{f}"))?;
            }
        }
        Ok(true)
    }

    fn emit_ksat(&mut self, kind: &str, k: &KSet, r: &KsatResult) -> Outcome {
        if self.g.json {
            let witness = match &r.status {
                KsatStatus::Sat(w) => Value::String(w.to_string()),
                _ => Value::Null,
            };
            let resolution = match r.status {
                KsatStatus::Exhausted { resolution } => json!(resolution),
                _ => Value::Null,
            };
            let cert: Vec<Value> = r.certificate.iter().map(|(f, v)| json!({"formula": f.to_string(), "value": truth_json(v)})).collect();
            self.emit_json(json!({
                "solver": kind,
                "logic": self.g.logic.name(),
                "semantics": self.g.semantics.name(),
                "K": k.to_string(),
                "status": status_name(&r.status),
                "resolution": resolution,
                "witness": witness,
                "certificate": cert,
            }))?;
        } else {
            self.line(status_name(&r.status))?;
            if let KsatStatus::Sat(w) = &r.status {
                self.line(format!("witness: {w}"))?;
                for (f, v) in &r.certificate {
                    self.line(format!("  {v}\t{f}"))?;
                }
            }
            if let KsatStatus::Exhausted { .. } = r.status {
                self.line("no grid witness found; this does not prove unsatisfiability")?;
            }
        }
        Ok(r.is_sat())
    }

    fn ksat(&mut self, exact: bool) -> Outcome {
        let (t, k) = (self.theory()?, self.kset()?);
        let (a, sem) = (self.g.logic, self.g.semantics);
        if exact && a != Algebra::Godel {
            return fail("--exact is only available for --logic godel");
        }
        let (kind, r) = if a == Algebra::Godel {
            ("exact", ksat_godel_exact(&t, &k, sem)?)
        } else {
            let n = self.g.resolution.or(self.g.n).unwrap_or(16);
            let budget = self.g.budget.map_or(DEFAULT_SEARCH_BUDGET, u128::from);
            ("grid", ksat_search(a, sem, &t, &k, n, budget)?)
        };
        self.emit_ksat(kind, &k, &r)
    }

    fn bridge(&mut self) -> Outcome {
        let (t, k) = (self.theory()?, self.kset()?);
        let r = classical_bridge(self.g.logic, self.g.semantics, &t, &k)?;
        self.emit_ksat("bridge", &k, &r)
    }

    fn metric(&mut self, m: &MetricArgs) -> Outcome {
        let a = self.g.logic;
        let mut results: Vec<(&str, String)> = Vec::new();
        match (&m.x, &m.y, &m.x2, &m.y2) {
            (Some(x), Some(y), None, None) => results.push(("d", metric_d(a, &value(x, "x")?, &value(y, "y")?).to_string())),
            (Some(x), Some(y), Some(x2), Some(y2)) => {
                let p = (value(x, "x")?, value(x2, "x2")?);
                let q = (value(y, "y")?, value(y2, "y2")?);
                results.push(("dd", metric_dd(a, (&p.0, &p.1), (&q.0, &q.1)).to_string()));
            }
            (None, None, None, None) => {}
            _ => return fail("give --x and --y, optionally with both --x2 and --y2"),
        }
        if let Some(b) = &m.ball {
            let (c, r) = b.split_once(',').ok_or_else(|| Failure("--ball expects center,radius".into()))?;
            results.push(("ball", dpi_open_ball(&value(c.trim(), "ball")?, &value(r.trim(), "ball")?)?.to_string()));
        }
        if let Some(text) = &m.compact {
            let d: KDescriptor = text.parse().map_err(|e| Failure(format!("--compact: {e}")))?;
            results.push(("compact_in_dG", compact_in_dg(&d).to_string()));
        }
        if results.is_empty() {
            return fail("metric needs --x/--y, --ball or --compact");
        }
        if self.g.json {
            let mut obj = serde_json::Map::new();
            obj.insert("logic".into(), json!(a.name()));
            for (k, v) in results {
                obj.insert(k.into(), json!(v));
            }
            self.emit_json(Value::Object(obj))?;
        } else {
            for (k, v) in results {
                self.line(format!("{k}: {v}"))?;
            }
        }
        Ok(true)
    }

    fn audit(&mut self, args: &AuditArgs) -> Outcome {
        let w = args.which;
        let on = |k: AuditKind| w == k || w == AuditKind::All;
        let seed = self.g.seed;
        let mut reports = Vec::new();
        if on(AuditKind::Laws) {
            reports.extend(algebra_laws(self.g.n.unwrap_or(32)));
        }
        if on(AuditKind::Oracle) {
            let oracle_n = self.g.resolution.unwrap_or(256);
            for a in Algebra::ALL {
                reports.push(oracle_agreement(a, self.g.n.unwrap_or(32), oracle_n)?);
            }
        }
        for a in Algebra::ALL {
            if on(AuditKind::Metric) {
                reports.push(metric_axioms_audit(a, self.g.n.unwrap_or(32)));
            }
            if on(AuditKind::Pairs) {
                reports.push(pair_metric_audit(a, self.g.n.unwrap_or(16))?);
            }
            if on(AuditKind::Lipschitz) {
                reports.push(lipschitz_audit(a, LipschitzOp::Tconorm, self.g.n.unwrap_or(16))?);
                reports.push(lipschitz_audit(a, LipschitzOp::Coresiduum, self.g.n.unwrap_or(16))?);
            }
            if on(AuditKind::Equivalence) {
                reports.push(equivalence_audit(a, self.g.n.unwrap_or(32)));
            }
            if on(AuditKind::Axioms) {
                for sem in SemanticsMode::ALL {
                    reports.push(axiom_validity_audit(a, sem, args.samples.unwrap_or(1000), seed)?);
                }
            }
            if on(AuditKind::Duality) {
                reports.push(semantic_duality_audit(a, args.samples.unwrap_or(500), 4, seed)?);
            }
        }
        let passed = reports.iter().all(AuditReport::passed);
        if self.g.json {
            self.emit_json(json!({"seed": seed, "passed": passed, "reports": reports.iter().map(report_json).collect::<Vec<_>>()}))?;
        } else {
            for r in &reports {
                self.line(r)?;
            }
        }
        Ok(passed)
    }

    fn heatmap(&mut self) -> Outcome {
        let (a, n) = (self.g.logic, self.g.n.unwrap_or(64));
        match &self.g.out {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                write_heatmap(a, n, std::io::BufWriter::new(file))?;
                if self.g.json {
                    self.emit_json(json!({"logic": a.name(), "n": n, "out": path.display().to_string()}))?;
                } else {
                    self.line(format!("wrote {}x{} heatmap of d_{} to {}", n + 1, n + 1, a.name(), path.display()))?;
                }
            }
            None => write_heatmap(a, n, &mut *self.out)?,
        }
        Ok(true)
    }

    fn one_structure(&self) -> Result<StructureFile, Failure> {
        match self.g.structure.as_slice() {
            [path] => self.structure_at(path),
            [] => fail("missing --structure"),
            _ => fail("this command takes a single --structure"),
        }
    }

    fn structure_at(&self, path: &Path) -> Result<StructureFile, Failure> {
        parse_structure(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    fn finite_structures(&self) -> Result<Vec<FiniteStructure>, Failure> {
        self.g
            .structure
            .iter()
            .map(|p| match self.structure_at(p)? {
                StructureFile::Finite(m) => Ok(m),
                StructureFile::Omega(_) => fail(format!("{}: expected a finite structure", p.display())),
            })
            .collect()
    }

    fn emit_theory_report(&mut self, label: &str, rep: &TheoryReport) -> Result<(), Failure> {
        if self.g.json {
            self.emit_json(json!({"structure": label, "models": rep.models, "sentences": sentences_json(&rep.sentences)}))?;
        } else {
            for s in &rep.sentences {
                let mark = if s.designated { "ok" } else { "FAIL" };
                self.line(format!("{}\t{mark}\t{}", s.value, s.formula))?;
            }
            self.line(format!("{label}: {}", if rep.models { "models the theory" } else { "does not model the theory" }))?;
        }
        Ok(())
    }

    fn structure_eval(&mut self) -> Outcome {
        let (a, sem) = (self.g.logic, self.g.semantics);
        match self.one_structure()? {
            StructureFile::Finite(m) => {
                let opts = ParseOptions { constants: m.signature().functions().filter(|(_, &ar)| ar == 0).map(|(n, _)| n.clone()).collect(), ..Default::default() };
                let t = self.formulas(&opts)?;
                if self.g.theory.is_some() {
                    let rep = check_theory(StructureRef::Finite(&m), a, sem, &t)?;
                    self.emit_theory_report("structure", &rep)?;
                    return Ok(rep.models);
                }
                let mut env = Vec::new();
                for (x, e) in parse_pairs(self.g.assign.as_deref().unwrap_or(""))? {
                    env.push((x, m.element(&e)?));
                }
                let f = &t.formulas[0];
                let v = interpret_indexed(sem, a, &m, f, &env)?;
                self.emit_value(f, &v)?;
                Ok(true)
            }
            StructureFile::Omega(s) => {
                let t = self.formulas(&ParseOptions::default())?;
                if self.g.theory.is_some() {
                    let rep = check_theory(StructureRef::Omega(&s), a, sem, &t)?;
                    self.emit_theory_report("omega structure", &rep)?;
                    return Ok(rep.models);
                }
                if sem != SemanticsMode::Standard {
                    return fail("omega structures are evaluated in standard semantics");
                }
                let f = &t.formulas[0];
                let v = omega_interpret(a, &s, f)?;
                self.emit_value(f, &v)?;
                Ok(true)
            }
        }
    }

    fn emit_value(&mut self, f: &Formula, v: &TruthValue) -> Result<(), Failure> {
        if self.g.json {
            self.emit_json(json!({"formula": f.to_string(), "value": truth_json(v)}))
        } else {
            self.line(v)
        }
    }

    fn repro(&mut self, r: &ReproArgs) -> Outcome {
        let n = self.g.n.unwrap_or(match r.example {
            Example::Chain => 3,
            _ => 1,
        }) as usize;
        let (a, sem) = (self.g.logic, self.g.semantics);
        match r.example {
            Example::Godelf => {
                let t = godelf_theory(n)?;
                if !r.with_witness {
                    return self.emit_theory(&t).map(|_| true);
                }
                let w = godelf_witness(n)?;
                let rep = check_theory(StructureRef::Omega(&w), Algebra::Godel, SemanticsMode::Standard, &t)?;
                self.emit_candidates(&t, &[("witness".into(), w, rep.clone())])?;
                Ok(rep.models)
            }
            Example::Prodf => {
                let t = prodf_theory(n)?;
                if !r.with_witness && self.g.structure.is_empty() {
                    return self.emit_theory(&t).map(|_| true);
                }
                let mut candidates: Vec<(String, OmegaStructure)> = if self.g.structure.is_empty() { prodf_candidates() } else { Vec::new() };
                for p in &self.g.structure {
                    match self.structure_at(p)? {
                        StructureFile::Omega(s) => candidates.push((p.display().to_string(), s)),
                        StructureFile::Finite(_) => return fail(format!("{}: prodf candidates are omega structures", p.display())),
                    }
                }
                let mut rows = Vec::new();
                for (name, s) in candidates {
                    let rep = check_theory(StructureRef::Omega(&s), Algebra::Product, SemanticsMode::Standard, &t)?;
                    rows.push((name, s, rep));
                }
                self.emit_candidates(&t, &rows)?;
                Ok(rows.iter().any(|(_, _, rep)| rep.models))
            }
            Example::Chain => {
                let t = chain_theory(n)?;
                if !r.with_witness {
                    return self.emit_theory(&t).map(|_| true);
                }
                let k = self.kset()?;
                if a != Algebra::Godel {
                    return fail("the chain witness uses the exact Gödel solver; use --logic godel");
                }
                let res = ksat_godel_exact(&t, &k, sem)?;
                self.emit_ksat("exact", &k, &res)
            }
        }
    }

    fn emit_theory(&mut self, t: &Theory) -> Result<(), Failure> {
        if self.g.json {
            self.emit_json(json!({"name": t.name, "formulas": t.formulas.iter().map(|f| f.to_string()).collect::<Vec<_>>()}))
        } else {
            write!(self.out, "{}", render_theory(t))?;
            Ok(())
        }
    }

    fn emit_candidates(&mut self, t: &Theory, rows: &[(String, OmegaStructure, TheoryReport)]) -> Result<(), Failure> {
        if self.g.json {
            let items: Vec<Value> = rows
                .iter()
                .map(|(name, s, rep)| json!({"name": name, "structure": render_omega(s), "models": rep.models, "sentences": sentences_json(&rep.sentences)}))
                .collect();
            return self.emit_json(json!({"theory": t.name, "candidates": items}));
        }
        for (name, s, rep) in rows {
            self.line(format!("# {name}"))?;
            write!(self.out, "{}", render_omega(s))?;
            self.emit_theory_report(name, rep)?;
        }
        Ok(())
    }

    fn budget(&self, max_index: Option<usize>, max_factor: Option<usize>) -> Budget {
        let d = Budget::default();
        Budget {
            max_index: max_index.unwrap_or(d.max_index),
            max_factor: max_factor.unwrap_or(d.max_factor),
            max_assignments: self.g.budget.map_or(d.max_assignments, |b| b as usize),
        }
    }

    fn product_inputs(&self, u: &UltraArgs) -> Result<(Vec<FiniteStructure>, tnorm_core::FilterDesc, GodelSet), Failure> {
        let factors = self.finite_structures()?;
        if factors.is_empty() {
            return fail("give one --structure per index");
        }
        let path = self.g.filter.as_ref().ok_or_else(|| Failure("missing --filter".into()))?;
        let f = parse_filter(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let space = match &u.space {
            Some(p) => parse_godel_set(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
            None => value_closure(&factors),
        };
        Ok((factors, f, space))
    }

    fn ultraproduct(&mut self, u: &UltraArgs) -> Outcome {
        let (factors, f, space) = self.product_inputs(u)?;
        let p = ultraproduct(&factors, &f, &space, self.budget(u.max_index, u.max_factor))?;
        let text = render_structure(&p.structure);
        if self.g.json {
            self.emit_json(json!({"filter": render_filter(&f)?, "space": space.to_string(), "structure": text}))?;
        } else {
            self.line(format!("# ultrafilter: {f}"))?;
            self.line(format!("# truth values: {space}"))?;
            write!(self.out, "{text}")?;
        }
        Ok(true)
    }

    fn los(&mut self, u: &UltraArgs) -> Outcome {
        let (factors, f, space) = self.product_inputs(u)?;
        let budget = self.budget(u.max_index, u.max_factor);
        let formulas = match (&self.g.formula, &self.g.theory) {
            (None, None) => single_quantifier_formulas(),
            _ => self.formulas(&ParseOptions::default())?.formulas,
        };
        let p = ultraproduct(&factors, &f, &space, budget)?;
        let reports = formulas.iter().map(|phi| los_check_in(&p, &factors, &space, phi, budget)).collect::<Result<Vec<_>, _>>()?;
        let holds = reports.iter().all(|r| r.holds());
        if self.g.json {
            let items: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "formula": r.formula.to_string(),
                        "instances": r.instances,
                        "holds": r.holds(),
                        "sentence_value": r.sentence_value.as_ref().map(truth_json),
                        "mismatches": r.mismatches.iter().map(|m| json!({"assignment": m.assignment, "product": truth_json(&m.product_value), "limit": truth_json(&m.limit_value)})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            self.emit_json(json!({"filter": render_filter(&f)?, "holds": holds, "reports": items}))?;
        } else {
            for r in &reports {
                self.line(r)?;
            }
            let total: u64 = reports.iter().map(|r| r.instances).sum();
            self.line(format!("{} formulas, {total} assignments: {}", reports.len(), if holds { "all equal" } else { "MISMATCH" }))?;
        }
        Ok(holds)
    }

    fn compactness(&mut self, c: &CompactArgs) -> Outcome {
        let t = self.theory()?;
        let pool = self.finite_structures()?;
        let preds: std::collections::BTreeSet<(String, usize)> = t.formulas.iter().flat_map(Formula::predicates).collect();
        let preds: Vec<(&str, usize)> = preds.iter().map(|(p, a)| (p.as_str(), *a)).collect();
        let grid = self.g.n.unwrap_or(2);
        let size = c.size;
        let factory = |sigma: &[usize]| -> tnorm_core::Result<FiniteStructure> {
            let sub = Theory::new("subset", sigma.iter().map(|&i| t.formulas[i].clone()).collect());
            for m in &pool {
                if let Ok(rep) = check_theory(StructureRef::Finite(m), Algebra::Godel, SemanticsMode::Standard, &sub) {
                    if rep.models {
                        return Ok(m.clone());
                    }
                }
            }
            let found = small_model_search(&sub, Algebra::Godel, SemanticsMode::Standard, &preds, size, grid)?;
            found.model.ok_or_else(|| tnorm_core::Error::Precondition(format!("no model of {{{}}} with at most {size} elements on the 1/{grid} grid", sigma.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))))
        };
        let rep = compactness_demo(&t, factory, self.budget(c.max_index, None))?;
        if self.g.json {
            self.emit_json(json!({
                "subsets": rep.index.len(),
                "sentence_sets": rep.sentence_sets,
                "finite_intersection_property": rep.finite_intersection_property,
                "filter": render_filter(&rep.filter)?,
                "product_size": rep.product_size,
                "sentence_values": rep.los.iter().map(|r| r.sentence_value.as_ref().map(truth_json)).collect::<Vec<_>>(),
                "models": rep.models,
            }))?;
        } else {
            self.line(&rep)?;
        }
        Ok(rep.models)
    }
}
