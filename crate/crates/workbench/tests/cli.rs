use std::path::{Path, PathBuf};

use serde_json::Value;
use tnorm_core::{evaluate, parse_formula, Algebra, SemanticsMode};
use tnorm_workbench::formats::{parse_assignment, parse_filter, parse_structure, StructureFile};
use tnorm_workbench::run;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn tnw(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tnw").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let r = tnw(&all);
    (r.code, serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_renders_and_desugars() {
    let r = tnw(&["parse", "--formula", "~p /\\ q"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("~p /\\ q\n  core: "), "{}", r.out);
    let (code, v) = json(&["parse", "--formula", "forall x. R(x, y)"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["free_variables"], serde_json::json!(["y"]));
    assert_eq!(tnw(&["parse", "--formula", "p &"]).code, 2);
    assert_eq!(tnw(&["parse"]).code, 2);
}

#[test]
fn eval_example_and_errors() {
    let r = tnw(&["eval", "--logic", "godel", "--semantics", "metric", "--formula", "p -> q", "--assign", "p=1/2,q=3/4"]);
    assert_eq!((r.code, r.out.as_str()), (0, "3/4\n"));
    let (code, v) = json(&["eval", "--logic", "lukasiewicz", "--formula", "p & q", "--assign", "p=1/2,q=3/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["value"], "1/4");
    assert_eq!(tnw(&["eval", "--formula", "p", "--assign", "p=0.5"]).code, 2);
    assert_eq!(tnw(&["eval", "--formula", "p"]).code, 2);
    assert_eq!(tnw(&["eval", "--logic", "hamacher", "--formula", "p"]).code, 2);
    assert_eq!(tnw(&["eval", "--no-such-flag"]).code, 2);
    assert_eq!(tnw(&["frobnicate"]).code, 2);
    assert_eq!(tnw(&["--help"]).code, 0);
}

#[test]
fn ksat_exit_codes_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let chain3 = write(dir.path(), "chain3.thy", "# chain of three\np1 -> p2\np1 -> p3\np2 -> p3\n");
    let r = tnw(&["ksat", "--logic", "godel", "--exact", "--K", "{1/4,1/2}", "--theory", s(&chain3)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("witness: p1=3/4,p2=1/2,p3=1/4"), "{}", r.out);

    let chain4 = tnw(&["repro", "--example", "chain", "--n", "4"]);
    let chain4 = write(dir.path(), "chain4.thy", &chain4.out);
    let r = tnw(&["ksat", "--exact", "--K", "{1/4,1/2}", "--theory", s(&chain4)]);
    assert_eq!((r.code, r.out.as_str()), (1, "unsat\n"));

    let (code, v) = json(&["ksat", "--logic", "product", "--K", "{1/4}", "--resolution", "4", "--theory", s(&write(dir.path(), "sq.thy", "p & p\n"))]);
    assert_eq!(code, 0);
    let w = parse_assignment(v["witness"].as_str().unwrap()).unwrap();
    let value = evaluate(SemanticsMode::Standard, Algebra::Product, &parse_formula("p & p").unwrap(), &w).unwrap();
    assert_eq!(value.to_string(), "1/4");

    let r = tnw(&["ksat", "--logic", "product", "--K", "{1/3}", "--resolution", "4", "--theory", s(&dir.path().join("sq.thy"))]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("exhausted at resolution 4"), "{}", r.out);
    assert_eq!(tnw(&["ksat", "--logic", "product", "--exact", "--K", "{1}", "--theory", s(&chain3)]).code, 2);
    assert_eq!(tnw(&["ksat", "--K", "{1}", "--theory", s(&dir.path().join("missing.thy"))]).code, 2);
    assert_eq!(tnw(&["ksat", "--K", "{0.5}", "--theory", s(&chain3)]).code, 2);

    let r = tnw(&["ksat", "--logic", "godel", "--K", "{1/2}", "--formula", "p /\\ ~~p"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("witness: p=1/2"), "{}", r.out);
    assert_eq!(tnw(&["ksat", "--K", "{1}", "--formula", "p", "--theory", s(&chain3)]).code, 2);
    assert_eq!(tnw(&["ksat", "--K", "{1}"]).code, 2);
}

#[test]
fn bridge_examples() {
    let dir = tempfile::tempdir().unwrap();
    let contra = write(dir.path(), "c.thy", "~~p\n~p\n");
    let loop_ = write(dir.path(), "l.thy", "p -> q\nq -> p\n");
    assert_eq!(tnw(&["bridge", "--logic", "product", "--K", "(0,1]", "--theory", s(&contra)]).code, 1);
    let r = tnw(&["bridge", "--logic", "godel", "--K", "(0,1]", "--theory", s(&loop_)]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("witness: p=1,q=1"));
    let r = tnw(&["bridge", "--logic", "godel", "--semantics", "metric", "--K", "[0,1)", "--theory", s(&loop_)]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("witness: p=0,q=0"), "{}", r.out);
    assert_eq!(tnw(&["bridge", "--logic", "lukasiewicz", "--K", "(0,1]", "--theory", s(&loop_)]).code, 2);
}

#[test]
fn metric_queries() {
    let r = tnw(&["metric", "--logic", "product", "--x", "1/2", "--y", "3/4"]);
    assert_eq!((r.code, r.out.as_str()), (0, "d: 1/2\n"));
    let (_, v) = json(&["metric", "--logic", "godel", "--x", "1/2", "--y", "1/3", "--x2", "0", "--y2", "1/4"]);
    assert_eq!(v["dd"], "1/2");
    let r = tnw(&["metric", "--ball", "1/2,1/4"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("ball: (1/3,5/8)"), "{}", r.out);
    let r = tnw(&["metric", "--compact", "{0} + harmonic(1,0)"]);
    assert_eq!(r.out, "compact_in_dG: true\n");
    let r = tnw(&["metric", "--compact", "harmonic(1,0)"]);
    assert_eq!(r.out, "compact_in_dG: false\n");
    assert_eq!(tnw(&["metric"]).code, 2);
    assert_eq!(tnw(&["metric", "--x", "1/2"]).code, 2);
    assert_eq!(tnw(&["metric", "--ball", "1/2,0"]).code, 2);
}

#[test]
fn audits_are_seeded() {
    let a = tnw(&["audit", "--which", "axioms", "--samples", "20", "--seed", "7"]);
    let b = tnw(&["audit", "--which", "axioms", "--samples", "20", "--seed", "7"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    assert_eq!(a.out.lines().count(), 6);
    let (code, v) = json(&["audit", "--which", "laws", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(tnw(&["audit", "--which", "duality", "--samples", "30"]).code, 0);
    assert_eq!(tnw(&["audit", "--which", "pairs", "--n", "4"]).code, 0);
}

#[test]
fn heatmap_to_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dpi.csv");
    let r = tnw(&["heatmap", "--logic", "product", "--n", "64", "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 65 + 1);
    assert!(!text.contains('\r'));
    let r = tnw(&["heatmap", "--logic", "godel", "--n", "2"]);
    assert_eq!(r.out, "x\\y,0,0.5,1\n0,0,0.5,1\n0.5,0.5,0,1\n1,1,1,0\n");
}

#[test]
fn structure_eval_finite_and_omega() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.str", "universe a b\npred R a = 1/3\npred R b = 2/3\nfun c = b\n");
    let r = tnw(&["structure-eval", "--structure", s(&m), "--formula", "forall x. R(x)"]);
    assert_eq!((r.code, r.out.as_str()), (0, "1/3\n"));
    let r = tnw(&["structure-eval", "--structure", s(&m), "--semantics", "metric", "--formula", "forall x. R(x)"]);
    assert_eq!(r.out, "2/3\n");
    let r = tnw(&["structure-eval", "--structure", s(&m), "--formula", "R(x) -> R(c)", "--assign", "x=a"]);
    assert_eq!(r.out, "1\n");
    assert_eq!(tnw(&["structure-eval", "--structure", s(&m), "--formula", "R(x)", "--assign", "x=z"]).code, 2);
    let thy = write(dir.path(), "t.thy", "exists x. R(x)\nR(c) -> R(c)\n");
    let r = tnw(&["structure-eval", "--structure", s(&m), "--theory", s(&thy)]);
    assert_eq!(r.code, 1, "{}{}", r.out, r.err);
    assert!(r.out.contains("does not model"));

    let w = tnw(&["repro", "--example", "godelf", "--n", "1", "--with-witness", "--json"]);
    let v: Value = serde_json::from_str(&w.out).unwrap();
    let omega_text = v["candidates"][0]["structure"].as_str().unwrap();
    assert!(matches!(parse_structure(omega_text).unwrap(), StructureFile::Omega(_)));
    let o = write(dir.path(), "w.omega", omega_text);
    let godelf = write(dir.path(), "g.thy", &tnw(&["repro", "--example", "godelf", "--n", "1"]).out);
    let r = tnw(&["structure-eval", "--structure", s(&o), "--theory", s(&godelf)]);
    assert_eq!(r.code, 0, "{}{}", r.out, r.err);
    let r = tnw(&["structure-eval", "--structure", s(&o), "--formula", "exists x. R(x)"]);
    assert_eq!(r.out, "1\n");
    assert_eq!(tnw(&["structure-eval", "--structure", s(&o), "--semantics", "metric", "--formula", "exists x. R(x)"]).code, 2);
}

#[test]
fn repro_examples() {
    let r = tnw(&["repro", "--example", "godelf", "--n", "3", "--with-witness"]);
    assert_eq!(r.code, 0);
    assert!(!r.out.contains("FAIL"));
    let (code, v) = json(&["repro", "--example", "prodf", "--n", "2", "--with-witness"]);
    assert_eq!(code, 1);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 4);
    let r = tnw(&["repro", "--example", "prodf", "--n", "2"]);
    assert_eq!(r.out.lines().count(), 4);
    let r = tnw(&["repro", "--example", "chain", "--n", "3", "--with-witness", "--K", "{1/4,1/2}"]);
    assert_eq!(r.code, 0);
    assert_eq!(tnw(&["repro", "--example", "chain", "--n", "1"]).code, 2);
    assert_eq!(tnw(&["repro", "--example", "nope"]).code, 2);
}

fn product_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let m1 = write(dir, "m1.str", "universe a b\npred R a = 1/2\npred R b = 1\n");
    let m2 = write(dir, "m2.str", "universe c d\npred R c = 0\npred R d = 1/2\n");
    let f = write(dir, "f.filter", "index 1 2\nprincipal 2\n");
    (m1, m2, f)
}

#[test]
fn ultraproduct_output_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let (m1, m2, f) = product_files(dir.path());
    let (code, v) = json(&["ultraproduct", "--structure", s(&m1), "--structure", s(&m2), "--filter", s(&f)]);
    assert_eq!(code, 0);
    let StructureFile::Finite(p) = parse_structure(v["structure"].as_str().unwrap()).unwrap() else { panic!("finite") };
    assert_eq!(p.universe(), ["(a,c)", "(a,d)", "(b,c)", "(b,d)"]);
    assert_eq!(p.predicate_value("R", &[1]).unwrap().to_string(), "1/2");
    assert_eq!(parse_filter(v["filter"].as_str().unwrap()).unwrap(), parse_filter("index 1 2\nprincipal 2").unwrap());
    let r = tnw(&["ultraproduct", "--structure", s(&m1), "--filter", s(&f)]);
    assert_eq!(r.code, 2);
    let bad = write(dir.path(), "bad.filter", "index 1 2\nsets {1,2}\n");
    assert_eq!(tnw(&["ultraproduct", "--structure", s(&m1), "--structure", s(&m2), "--filter", s(&bad)]).code, 2);
}

#[test]
fn los_and_compactness() {
    let dir = tempfile::tempdir().unwrap();
    let (m1, m2, f) = product_files(dir.path());
    let r = tnw(&["los", "--structure", s(&m1), "--structure", s(&m2), "--filter", s(&f)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.ends_with("all equal\n"));
    let (code, v) = json(&["los", "--structure", s(&m1), "--structure", s(&m2), "--filter", s(&f), "--formula", "forall x. R(x)"]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"][0]["sentence_value"], "0");

    let thy = write(dir.path(), "two.thy", "exists x. R(x)\nforall x. (R(x) -> R(x))\n");
    let r = tnw(&["compactness-demo", "--theory", s(&thy)]);
    assert_eq!(r.code, 0, "{}{}", r.out, r.err);
    assert!(r.out.ends_with("models: true\n"), "{}", r.out);
    let (code, v) = json(&["compactness-demo", "--theory", s(&thy), "--structure", s(&m1)]);
    assert_eq!(code, 0);
    assert_eq!(v["subsets"], 4);
    let unsat = write(dir.path(), "u.thy", "exists x. R(x)\n~exists x. R(x)\n");
    assert_eq!(tnw(&["compactness-demo", "--theory", s(&unsat)]).code, 2);
}
