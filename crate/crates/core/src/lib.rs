//! A prover for the prenex fragment of first-order Gödel logic with the
//! projection operator Δ.
//!
//! The pipeline runs parse, Skolemize, clausify into order clauses, then
//! saturates with ordered chaining. [`oracle`] is an exhaustive ground
//! decision procedure used to cross-check every stage at small scale.

pub mod chaining;
pub mod clause;
pub mod clausify;
pub mod formula;
pub mod io;
pub mod oracle;
pub mod prover;
pub mod skolem;
pub mod term;

pub use chaining::{ReductionOrder, SaturationResult, Substitution};
pub use clause::{OrderClause, OrderLiteral};
pub use formula::{Formula, PrenexFormula, Quantifier};
pub use io::{parse_clauses, parse_problem, render_clause, render_formula, ProblemFile};
pub use prover::{Answer, Limits, Verdict};
pub use term::{Origin, Symbol, Term, Var};
