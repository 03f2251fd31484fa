//! Acceptance run: one PASS/FAIL line per criterion, with wall-clock times.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tnorm_core::audit::{algebra_laws, oracle_agreement, AuditReport};
use tnorm_core::axioms::{axiom_validity_audit, random_value};
use tnorm_core::filters::Family;
use tnorm_core::fo::interpret_indexed;
use tnorm_core::generate::{nested_sentences, random_formula, random_theories, single_quantifier_formulas, tuples_over, unary_structures};
use tnorm_core::ksat::chain_law_predicts_sat;
use tnorm_core::metric::{lipschitz_audit, metric_axioms_audit, pair_metric_audit, LipschitzOp};
use tnorm_core::repro::{godelf_theory, godelf_witness, prodf_candidates, prodf_theory, small_model_search};
use tnorm_core::ultra::los_check_in;
use tnorm_core::{
    chain_theory, check_theory, classical_bridge, compactness_demo, evaluate, ksat_godel_exact, omega_interpret, order_lemma_check,
    parse_formula, ultraproduct, Algebra, Budget, Evaluation, FilterDesc, FiniteStructure, GodelSet, KSet, Rational, SemanticsMode,
    StructureRef, Theory, TruthValue,
};
use tnorm_workbench::heatmap::{decimal, write_heatmap, SIGNIFICANT_DIGITS};

use common::{classical_sat, godel_ksat_oracle, grid_search, oracle_eval, prop_eval, tv, Ops};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn audits(reports: &[AuditReport]) -> Result<u64, String> {
    for r in reports {
        ensure(r.passed(), || r.to_string())?;
    }
    Ok(reports.iter().map(|r| r.checked).sum())
}

fn algebra() -> Check {
    let n = audits(&algebra_laws(32))?;
    Ok(format!("{n} instances on the 1/32 grid"))
}

fn residua() -> Check {
    let bound = Rational::new(1.into(), 256.into());
    let mut worst = Rational::zero();
    for a in Algebra::ALL {
        let r = oracle_agreement(a, 32, 256).map_err(|e| e.to_string())?;
        let d = r.max_deviation.clone().unwrap_or_else(Rational::zero);
        ensure(d <= bound, || format!("{r}"))?;
        worst = worst.max(d);
    }
    Ok(format!("max deviation {worst} at oracle grid 256"))
}

fn metric() -> Check {
    let mut reports = Vec::new();
    for a in Algebra::ALL {
        reports.push(metric_axioms_audit(a, 32));
        reports.push(pair_metric_audit(a, 16).map_err(|e| e.to_string())?);
        for op in [LipschitzOp::Tconorm, LipschitzOp::Coresiduum] {
            reports.push(lipschitz_audit(a, op, 16).map_err(|e| e.to_string())?);
        }
    }
    Ok(format!("{} instances", audits(&reports)?))
}

fn axioms() -> Check {
    let mut reports = Vec::new();
    for a in Algebra::ALL {
        for sem in SemanticsMode::ALL {
            reports.push(axiom_validity_audit(a, sem, 1000, 0).map_err(|e| e.to_string())?);
        }
    }
    Ok(format!("{} schema instances", audits(&reports)?))
}

fn duality() -> Check {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    let mut count = 0;
    for (i, a) in Algebra::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..500 {
            let f = random_formula(&mut rng, &ATOMS, 4);
            let mut v = Evaluation::new();
            for p in ATOMS {
                v.insert(p, random_value(&mut rng));
            }
            let m = evaluate(SemanticsMode::Metric, a, &f, &v).map_err(|e| e.to_string())?;
            let s = evaluate(SemanticsMode::Standard, a, &f, &v.dual()).map_err(|e| e.to_string())?;
            ensure(m == s.complement(), || format!("{a}: {f} at {v}: metric {m}, standard {s}"))?;
            let vm: BTreeMap<String, TruthValue> = v.iter().map(|(k, x)| (k.clone(), x.clone())).collect();
            ensure(prop_eval(SemanticsMode::Metric, a, &f, &vm) == m, || format!("{a}: {f} disagrees with the reference evaluator"))?;
            count += 1;
        }
    }
    Ok(format!("{count} formula/evaluation pairs"))
}

fn generated_theories() -> Vec<Theory> {
    random_theories(&mut ChaCha8Rng::seed_from_u64(2024), 200, 3, 4, 3)
}

fn ksets(texts: &[&str]) -> Vec<KSet> {
    texts.iter().map(|t| t.parse().unwrap()).collect()
}

fn godel_exact() -> Check {
    let ks = ksets(&["{1}", "{0}", "{1/4,1/2}", "{0,1/2,1}", "(0,1]", "[0,1)", "[0,1/2]", "(1/4,3/4)", "{}", "{1/5,2/5,3/5,4/5}", "[1/2,1] u {1/8}"]);
    let mut instances = 0;
    for t in generated_theories() {
        for k in &ks {
            for sem in SemanticsMode::ALL {
                let exact = ksat_godel_exact(&t, k, sem).map_err(|e| e.to_string())?;
                ensure(exact.is_sat() == godel_ksat_oracle(&t, k, sem), || format!("oracle disagrees: {sem} K={k}\n{t}"))?;
                let grid = grid_search(sem, Algebra::Godel, &t, k, 8);
                ensure(grid.is_none() || exact.is_sat(), || format!("grid witness missed: {sem} K={k}\n{t}"))?;
                if let tnorm_core::KsatStatus::Sat(w) = &exact.status {
                    for f in &t.formulas {
                        ensure(k.contains(&evaluate(sem, Algebra::Godel, f, w).unwrap()), || format!("bad witness {w} for {f}"))?;
                    }
                }
                instances += 1;
            }
        }
    }
    let points: Vec<TruthValue> = (0..6).map(|i| tv(i, 6)).collect();
    let mut laws = 0;
    for n in 2..=6 {
        let t = chain_theory(n).map_err(|e| e.to_string())?;
        for mask in 1u32..1 << points.len() {
            if mask.count_ones() > 5 {
                continue;
            }
            let k = KSet::points((0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i].clone()));
            let sat = ksat_godel_exact(&t, &k, SemanticsMode::Standard).map_err(|e| e.to_string())?.is_sat();
            ensure(sat == (n - 1 <= mask.count_ones() as usize), || format!("chain law fails at n={n}, K={k}"))?;
            ensure(sat == chain_law_predicts_sat(n, &k), || format!("predictor disagrees at n={n}, K={k}"))?;
            laws += 1;
        }
    }
    Ok(format!("{instances} solver instances, {laws} chain-law instances"))
}

fn bridge() -> Check {
    let standard = ksets(&["(0,1]", "{1}", "{1/2,1}", "[1/3,1]"]);
    let metric = ksets(&["[0,1)", "{0}", "{0,1/2}"]);
    let mut count = 0;
    for t in generated_theories() {
        for (sem, ks) in [(SemanticsMode::Standard, &standard), (SemanticsMode::Metric, &metric)] {
            for k in ks {
                let b = classical_bridge(Algebra::Godel, sem, &t, k).map_err(|e| e.to_string())?;
                let e = ksat_godel_exact(&t, k, sem).map_err(|e| e.to_string())?;
                ensure(b.is_sat() == e.is_sat(), || format!("{sem} K={k}\n{t}"))?;
                ensure(b.is_sat() == classical_sat(&t), || format!("truth tables disagree\n{t}"))?;
                count += 1;
            }
        }
    }
    let k: KSet = "(0,1]".parse().unwrap();
    let th = |fs: &[&str]| Theory::new("t", fs.iter().map(|f| parse_formula(f).unwrap()).collect());
    for a in [Algebra::Godel, Algebra::Product] {
        let r = classical_bridge(a, SemanticsMode::Standard, &th(&["~~p", "~p"]), &k).map_err(|e| e.to_string())?;
        ensure(!r.is_sat(), || format!("{a}: {{~~p, ~p}} reported sat"))?;
        let r = classical_bridge(a, SemanticsMode::Standard, &th(&["p -> q", "q -> p"]), &k).map_err(|e| e.to_string())?;
        ensure(r.is_sat(), || format!("{a}: {{p->q, q->p}} reported unsat"))?;
    }
    Ok(format!("{count} instances plus examples"))
}

fn fo_engines() -> Check {
    let values = [tv(0, 1), tv(1, 2), tv(1, 1)];
    let mut formulas = single_quantifier_formulas();
    formulas.extend(nested_sentences());
    let empty = BTreeMap::new();
    let mut evaluations = 0u64;
    for m in unary_structures(3, &values, false) {
        for f in &formulas {
            let vars: Vec<String> = f.free_vars().into_iter().collect();
            for elems in tuples_over(&(0..m.size()).collect::<Vec<_>>(), vars.len()) {
                let env: Vec<(String, usize)> = vars.iter().cloned().zip(elems).collect();
                let env_map: BTreeMap<String, usize> = env.iter().cloned().collect();
                for a in Algebra::ALL {
                    for sem in SemanticsMode::ALL {
                        let got = interpret_indexed(sem, a, &m, f, &env).map_err(|e| e.to_string())?;
                        ensure(got == oracle_eval(&Ops { sem, a }, Some(&m), f, &empty, &env_map), || format!("{a} {sem} {f} {env:?}"))?;
                        evaluations += 1;
                    }
                }
            }
        }
    }
    for n in 1..=3 {
        let t = godelf_theory(n).map_err(|e| e.to_string())?;
        let w = godelf_witness(n).map_err(|e| e.to_string())?;
        let rep = check_theory(StructureRef::Omega(&w), Algebra::Godel, SemanticsMode::Standard, &t).map_err(|e| e.to_string())?;
        ensure(rep.sentences.iter().all(|s| s.value.is_one()), || format!("godelf witness n={n}: {rep:?}"))?;
    }
    let t = godelf_theory(1).map_err(|e| e.to_string())?;
    let search = small_model_search(&t, Algebra::Godel, SemanticsMode::Standard, &[("R", 1), ("rho1", 1)], 3, 8).map_err(|e| e.to_string())?;
    ensure(search.model.is_none(), || "godelf(1) has a small model".into())?;
    Ok(format!("{evaluations} fold comparisons, {} candidate models searched", search.examined))
}

fn los() -> Check {
    let values = vec![tv(0, 1), tv(1, 2), tv(1, 1)];
    let space = GodelSet::finite(values.iter().cloned());
    let factors = unary_structures(2, &values, false);
    let formulas = single_quantifier_formulas();
    let budget = Budget::default();
    let mut instances = 0u64;
    for size in [2, 3] {
        for pick in tuples_over(&(0..factors.len()).collect::<Vec<_>>(), size) {
            let ms: Vec<FiniteStructure> = pick.iter().map(|&i| factors[i].clone()).collect();
            for f in FilterDesc::all_ultrafilters(size) {
                let u = ultraproduct(&ms, &f, &space, budget).map_err(|e| e.to_string())?;
                for phi in &formulas {
                    let r = los_check_in(&u, &ms, &space, phi, budget).map_err(|e| e.to_string())?;
                    ensure(r.holds(), || r.to_string())?;
                    instances += r.instances;
                }
            }
        }
    }
    let mut lemma = 0u64;
    for size in [2, 3] {
        let families = tuples_over(&values, size);
        for f in FilterDesc::all_ultrafilters(size) {
            for xs in &families {
                for ys in &families {
                    let (l, r) = order_lemma_check(&Family::Finite(xs.clone()), &Family::Finite(ys.clone()), &f, &space).map_err(|e| e.to_string())?;
                    ensure(l == r, || format!("order lemma at {f}: {xs:?} vs {ys:?}"))?;
                    lemma += 1;
                }
            }
        }
    }
    Ok(format!("{instances} Łoś assignments over {} factors, {lemma} order-lemma instances", factors.len()))
}

/// `d(x, y)` written out per family.
fn closed_form_d(a: Algebra, x: &Rational, y: &Rational) -> Rational {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == hi {
        return Rational::zero();
    }
    match a {
        Algebra::Lukasiewicz => hi - lo,
        Algebra::Godel => hi.clone(),
        Algebra::Product => (hi - lo) / (Rational::one() - lo),
    }
}

fn compactness_and_heatmap() -> Check {
    let t = Theory::new("two", vec![parse_formula("exists x. R(x)").unwrap(), parse_formula("forall x. (R(x) -> S(x))").unwrap()]);
    let factory = |sigma: &[usize]| {
        let mut m = FiniteStructure::new(vec!["a".into(), "b".into()])?;
        m.declare_predicate("R", 1, TruthValue::zero())?;
        m.declare_predicate("S", 1, TruthValue::one())?;
        m.set_predicate("R", &[sigma.len() % 2], TruthValue::one())?;
        Ok(m)
    };
    let rep = compactness_demo(&t, factory, Budget::default()).map_err(|e| e.to_string())?;
    ensure(rep.models && rep.finite_intersection_property, || rep.to_string())?;
    ensure(rep.los.iter().all(|r| r.holds() && r.sentence_value.as_ref().is_some_and(TruthValue::is_one)), || rep.to_string())?;

    let n = 64;
    let grid: Vec<Rational> = (0..=n).map(|i| Rational::new(i.into(), n.into())).collect();
    let render = |r: &Rational| decimal(r, SIGNIFICANT_DIGITS);
    for a in Algebra::ALL {
        let mut buf = Vec::new();
        write_heatmap(a, n as u32, &mut buf).map_err(|e| e.to_string())?;
        let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        ensure(rows.len() == grid.len() + 1, || format!("{a}: {} rows", rows.len()))?;
        for (j, y) in grid.iter().enumerate() {
            ensure(rows[0][j + 1] == render(y), || format!("{a}: header column {j}"))?;
        }
        for (i, x) in grid.iter().enumerate() {
            let row = &rows[i + 1];
            ensure(row.len() == grid.len() + 1 && row[0] == render(x), || format!("{a}: row {i} header"))?;
            for (j, y) in grid.iter().enumerate() {
                let want = render(&closed_form_d(a, x, y));
                ensure(row[j + 1] == want, || format!("{a}: cell ({i},{j}) is {} not {want}", &row[j + 1]))?;
            }
        }
    }
    Ok(format!("model on {} product elements, 3 heatmaps of 65x65 cells", rep.product_size))
}

fn prodf() -> Check {
    let mut rows = 0;
    for n in 1..=3usize {
        let t = prodf_theory(n).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        let code = tnorm_workbench::run(["tnw", "repro", "--example", "prodf", "--n", &n.to_string(), "--with-witness", "--json"], &mut out, &mut Vec::new());
        ensure(code == 0 || code == 1, || format!("repro exited with {code}"))?;
        let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        let candidates = prodf_candidates();
        let reported = v["candidates"].as_array().ok_or("no candidates in output")?;
        ensure(reported.len() == candidates.len(), || "candidate count".into())?;
        for ((name, s), r) in candidates.iter().zip(reported) {
            let sentences = r["sentences"].as_array().ok_or("no sentences")?;
            ensure(sentences.len() == t.len(), || format!("{name}: sentence count"))?;
            let rep = check_theory(StructureRef::Omega(s), Algebra::Product, SemanticsMode::Standard, &t).map_err(|e| e.to_string())?;
            for ((f, shown), checked) in t.formulas.iter().zip(sentences).zip(&rep.sentences) {
                let direct = omega_interpret(Algebra::Product, s, f).map_err(|e| e.to_string())?;
                let shown_value: TruthValue = shown["value"].as_str().ok_or("value")?.parse().map_err(|e: tnorm_core::Error| e.to_string())?;
                ensure(shown_value == direct && checked.value == direct, || format!("{name} n={n}: {f} shown {shown_value}, direct {direct}"))?;
                ensure(shown["formula"] == f.to_string(), || format!("{name}: formula text"))?;
                rows += 1;
            }
            ensure(r["models"] == rep.models, || format!("{name}: verdict"))?;
        }
    }
    Ok(format!("{rows} reported sentence values re-evaluated"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "algebra laws", limit: Some(Duration::from_secs(5)), run: algebra },
        Criterion { id: 2, name: "residua vs oracles", limit: None, run: residua },
        Criterion { id: 3, name: "metric theorems", limit: Some(Duration::from_secs(30)), run: metric },
        Criterion { id: 4, name: "axiom validity", limit: None, run: axioms },
        Criterion { id: 5, name: "semantics duality", limit: None, run: duality },
        Criterion { id: 6, name: "Gödel exact solver", limit: None, run: godel_exact },
        Criterion { id: 7, name: "classical bridge", limit: None, run: bridge },
        Criterion { id: 8, name: "first-order engines", limit: Some(Duration::from_secs(60)), run: fo_engines },
        Criterion { id: 9, name: "Łoś and order lemma", limit: Some(Duration::from_secs(60)), run: los },
        Criterion { id: 10, name: "compactness and heatmap", limit: None, run: compactness_and_heatmap },
        Criterion { id: 11, name: "prodf consistency", limit: None, run: prodf },
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|o| o == c.id)) {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let over = c.limit.filter(|l| took > *l);
        let verdict = match (&result, over) {
            (Ok(_), None) => "PASS",
            _ => "FAIL",
        };
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        let detail = match (&result, over) {
            (Ok(d), None) => d.clone(),
            (Ok(d), Some(l)) => format!("{d}; exceeded the {}s limit", l.as_secs()),
            (Err(e), _) => e.clone(),
        };
        println!("criterion {:>2} {verdict} {} ({:.2}s{limit}): {detail}", c.id, c.name, took.as_secs_f64());
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
