//! Exact many-valued logic over the three fundamental continuous t-norms.
//!
//! Truth values are exact rationals in `[0, 1]`. Every connective is
//! interpreted either in the usual order (1 is absolute truth, `&` is a
//! t-norm) or in the reversed *metric* order (0 is absolute truth, `&` is a
//! t-conorm), and everything in the crate is parameterised by both an
//! [`Algebra`] and a [`SemanticsMode`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV output and
//! the command-line frontend live in the `tnorm-workbench` crate.
//!
//! ```
//! use tnorm_core::{parse_formula, evaluate, Algebra, Evaluation, SemanticsMode, TruthValue};
//!
//! let f = parse_formula("p -> q").unwrap();
//! let mut v = Evaluation::new();
//! v.insert("p", TruthValue::ratio(1, 2).unwrap());
//! v.insert("q", TruthValue::ratio(3, 4).unwrap());
//! let value = evaluate(SemanticsMode::Metric, Algebra::Godel, &f, &v).unwrap();
//! assert_eq!(value.to_string(), "3/4");
//! ```
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod audit;
pub mod axioms;
pub mod error;
pub mod filters;
pub mod fo;
pub mod formula;
pub mod generate;
pub mod kset;
pub mod ksat;
pub mod metric;
pub mod omega;
pub mod order;
pub mod parser;
pub mod poly;
pub mod repro;
pub mod semantics;
pub mod sequence;
pub mod ultra;
pub mod value;

pub use algebra::{Algebra, OracleMode};
pub use audit::AuditReport;
pub use error::{Error, Result};
pub use filters::{d_limit, order_lemma_check, Family, FilterDesc, GodelSet};
pub use fo::{check_theory, interpret, Assignment, FiniteStructure, Signature, StructureRef, TheoryReport};
pub use formula::{Formula, Term, Theory};
pub use kset::{Interval, KSet};
pub use ksat::{chain_theory, classical_bridge, ksat_godel_exact, ksat_search, KsatResult, KsatStatus};
pub use metric::{compact_in_dg, dpi_open_ball, metric_d, metric_dd, KDescriptor, OpenBall};
pub use omega::{omega_interpret, OmegaStructure};
pub use order::{order_abstract_value, OrderAbstraction};
pub use parser::{parse_formula, parse_formula_with, ParseError, ParseOptions};
pub use semantics::{evaluate, Evaluation, SemanticsMode};
pub use sequence::{SequenceExpr, SequenceForm};
pub use ultra::{compactness_demo, los_check, ultraproduct, Budget, CompactnessReport, LosReport, Ultraproduct};
pub use value::{parse_rational, Rational, TruthValue};
