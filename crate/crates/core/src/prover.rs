//! End-to-end pipelines: validity, 1-satisfiability, Herbrand search and
//! the ground oracle.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::chaining::{saturate, ProofTrace, ReductionOrder, SaturationLimits, SaturationResult, SaturationStats};
use crate::clause::{clause_symbols, OrderClause};
use crate::clausify::{cl_sat, cl_val, density_symbol, hex_to_clauses, theory_clauses, ClausifyError};
use crate::formula::{Formula, PrenexFormula};
use crate::io::ProblemFile;
use crate::oracle::{ground_sat, ground_valid, herbrand_validity_search, OracleConfig, OracleError};
use crate::skolem::{
    deskolemize, guard_symbol, hex, skolemize_sat, skolemize_sat_delta, skolemize_validity, HerbrandDisjunction,
    NameSupply, SkolemError,
};
use crate::term::{Origin, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Valid,
    NotValid,
    Sat,
    Unsat,
    Unknown,
}

impl Answer {
    pub fn is_decisive(self) -> bool {
        self != Answer::Unknown
    }

    pub fn token(self) -> &'static str {
        match self {
            Answer::Valid => "VALID",
            Answer::NotValid => "NOT_VALID",
            Answer::Sat => "SAT",
            Answer::Unsat => "UNSAT",
            Answer::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Per-saturation resource limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_clauses: usize,
    pub timeout: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_clauses: 100_000,
            timeout: Duration::from_secs(10),
        }
    }
}

impl From<Limits> for SaturationLimits {
    fn from(l: Limits) -> Self {
        SaturationLimits {
            max_clauses: l.max_clauses,
            max_time: l.timeout,
        }
    }
}

/// The clause set handed to the saturation engine for one conjunct (or for
/// the whole problem in SAT mode).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSet {
    /// Clauses from the translation of the formula itself.
    pub clauses: Vec<OrderClause>,
    /// EEf, EP and DO.
    pub theory: Vec<OrderClause>,
    pub order: ReductionOrder,
}

impl ClauseSet {
    pub fn all(&self) -> Vec<OrderClause> {
        let mut v = self.clauses.clone();
        v.extend(self.theory.iter().cloned());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    /// Clause sets in the order they were saturated.
    pub clause_sets: Vec<ClauseSet>,
    /// Refutations, one per refuted clause set.
    pub traces: Vec<ProofTrace>,
    /// The final active set of a saturated clause set.
    pub saturated: Option<Vec<OrderClause>>,
    pub stats: Vec<SaturationStats>,
    /// Herbrand mode: one instance tuple per disjunct.
    pub witness: Option<Vec<Vec<Term>>>,
    /// Herbrand mode: the de-Skolemized witness.
    pub reconstruction: Option<Formula>,
    pub elapsed: Duration,
}

impl Verdict {
    fn new(answer: Answer) -> Self {
        Verdict {
            answer,
            clause_sets: Vec::new(),
            traces: Vec::new(),
            saturated: None,
            stats: Vec::new(),
            witness: None,
            reconstruction: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn generated(&self) -> usize {
        self.stats.iter().map(|s| s.generated).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProverError {
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
    #[error(transparent)]
    Skolem(#[from] SkolemError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("herbrand mode takes a single conjunct, found {0}")]
    NotSingle(usize),
    #[error("conjunct {0} is not ground")]
    NotGround(usize),
}

fn input_symbols(fs: &[&PrenexFormula]) -> Vec<Symbol> {
    let mut out = Vec::new();
    for f in fs {
        out.extend(f.matrix.predicates());
        out.extend(f.matrix.function_symbols());
    }
    out
}

fn def_index(s: &Symbol) -> (usize, String) {
    (s.name().len(), s.name().to_string())
}

/// Precedence by introduction: input, Skolem, definitional, Hex. The
/// density symbol comes last, see [`with_theory`].
fn build_order(input: &[Symbol], skolem: &[Symbol], clauses: &[OrderClause]) -> ReductionOrder {
    let mut o = ReductionOrder::new(input.iter().chain(skolem));
    let syms = clause_symbols(clauses);
    let mut defs: Vec<&Symbol> = syms.iter().filter(|s| s.origin() == Origin::Definitional).collect();
    defs.sort_by_key(|s| def_index(s));
    for s in defs {
        o.introduce(s.clone());
    }
    for s in syms.iter().filter(|s| s.origin() == Origin::HexWitness) {
        o.introduce(s.clone());
    }
    for s in syms {
        o.introduce(s);
    }
    o
}

fn with_theory(clauses: Vec<OrderClause>, order: ReductionOrder, names: &mut NameSupply) -> ClauseSet {
    let density = density_symbol(names);
    let theory = theory_clauses(&clause_symbols(&clauses), &density);
    let mut order = order;
    order.introduce(density);
    ClauseSet { clauses, theory, order }
}

/// The validity clause set of one conjunct: `Φ`, then `CLval`, then the
/// theory clauses.
pub fn validity_clauses(a: &PrenexFormula) -> Result<ClauseSet, ProverError> {
    let mut names = NameSupply::for_formulas([&a.matrix]);
    let (sk, sig) = skolemize_validity(a, &mut names);
    let clauses = cl_val(&sk.matrix, &mut names)?;
    let order = build_order(&input_symbols(&[a]), &sig.symbols, &clauses);
    Ok(with_theory(clauses, order, &mut names))
}

/// The combined 1-satisfiability clause set: dual Skolemization for
/// Δ-rooted matrices, `skq` for the rest, `Hex` when some guard occurs,
/// then `CLsat`.
pub fn sat_clauses(p: &ProblemFile) -> Result<ClauseSet, ProverError> {
    let formulas = p.formulas();
    let mut names = NameSupply::for_formulas(&formulas);
    let q = guard_symbol(&mut names);
    let mut skolem = Vec::new();
    let mut matrices = Vec::new();
    let mut guarded = false;
    for a in &p.conjuncts {
        let (sk, sig) = if matches!(a.matrix, Formula::Delta(_)) {
            skolemize_sat_delta(a, &mut names)?
        } else {
            let (sk, sig) = skolemize_sat(a, &q, &mut names);
            guarded |= !sig.symbols.is_empty();
            (sk, sig)
        };
        skolem.extend(sig.symbols);
        matrices.push(sk.matrix);
    }
    let mut clauses = Vec::new();
    for m in &matrices {
        clauses.extend(cl_sat(m, &mut names)?);
    }
    if guarded {
        skolem.insert(0, q.clone());
        let mut preds: Vec<Symbol> = vec![q.clone()];
        for m in &matrices {
            for s in m.predicates() {
                if !preds.contains(&s) {
                    preds.push(s);
                }
            }
        }
        let (hs, _) = hex(&q, &preds, &mut names);
        for h in &hs {
            clauses.push(hex_to_clauses(h)?);
        }
    }
    let clauses = crate::clause::normalize_set(clauses);
    let conjuncts: Vec<&PrenexFormula> = p.conjuncts.iter().collect();
    let order = build_order(&input_symbols(&conjuncts), &skolem, &clauses);
    Ok(with_theory(clauses, order, &mut names))
}

/// Saturates each conjunct's validity clause set. VALID when all are
/// refuted, NOT_VALID as soon as one saturates, UNKNOWN otherwise.
pub fn prove_valid(p: &ProblemFile, limits: Limits) -> Result<Verdict, ProverError> {
    let start = Instant::now();
    let mut v = Verdict::new(Answer::Valid);
    for a in &p.conjuncts {
        let set = validity_clauses(a)?;
        let r = saturate(&set.all(), &set.order, limits.into());
        v.stats.push(r.stats());
        v.clause_sets.push(set);
        match r {
            SaturationResult::Unsat { trace, .. } => v.traces.push(trace),
            SaturationResult::Saturated { clauses, .. } => {
                v.answer = Answer::NotValid;
                v.saturated = Some(clauses);
                break;
            }
            SaturationResult::ResourceOut { .. } => v.answer = Answer::Unknown,
        }
    }
    v.elapsed = start.elapsed();
    Ok(v)
}

/// Saturates the combined 1-satisfiability clause set.
pub fn check_sat(p: &ProblemFile, limits: Limits) -> Result<Verdict, ProverError> {
    let start = Instant::now();
    let set = sat_clauses(p)?;
    let r = saturate(&set.all(), &set.order, limits.into());
    let mut v = Verdict::new(Answer::Unknown);
    v.stats.push(r.stats());
    v.clause_sets.push(set);
    match r {
        SaturationResult::Unsat { trace, .. } => {
            v.answer = Answer::Unsat;
            v.traces.push(trace);
        }
        SaturationResult::Saturated { clauses, .. } => {
            v.answer = Answer::Sat;
            v.saturated = Some(clauses);
        }
        SaturationResult::ResourceOut { .. } => {}
    }
    v.elapsed = start.elapsed();
    Ok(v)
}

/// Searches a valid Herbrand disjunction for the single conjunct and, on
/// success, de-Skolemizes it.
pub fn herbrand_mode(p: &ProblemFile, depth: usize, width: usize, cfg: &OracleConfig) -> Result<Verdict, ProverError> {
    let start = Instant::now();
    let [a] = p.conjuncts.as_slice() else {
        return Err(ProverError::NotSingle(p.conjuncts.len()));
    };
    let mut names = NameSupply::for_formulas([&a.matrix]);
    let (sk, sig) = skolemize_validity(a, &mut names);
    let mut v = Verdict::new(Answer::Unknown);
    if let Some(instances) = herbrand_validity_search(&sk, depth, width, cfg)? {
        let h = HerbrandDisjunction {
            original: a.clone(),
            skolemized: sk,
            signature: sig,
            instances,
        };
        v.reconstruction = Some(deskolemize(&h)?);
        v.witness = Some(h.instances);
        v.answer = Answer::Valid;
    }
    v.elapsed = start.elapsed();
    Ok(v)
}

/// Which question [`oracle_mode`] answers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Question {
    #[default]
    Valid,
    Sat,
}

/// Decides a ground problem by enumerating order types.
pub fn oracle_mode(p: &ProblemFile, question: Question, cfg: &OracleConfig) -> Result<Verdict, ProverError> {
    let start = Instant::now();
    for (i, a) in p.conjuncts.iter().enumerate() {
        if !a.prefix.is_empty() {
            return Err(ProverError::NotGround(i + 1));
        }
    }
    let mut it = p.conjuncts.iter().map(|a| a.matrix.clone());
    let first = it.next().unwrap_or(Formula::Top);
    let m = it.fold(first, Formula::and);
    let answer = match question {
        Question::Valid if ground_valid(&m, cfg)? => Answer::Valid,
        Question::Valid => Answer::NotValid,
        Question::Sat if ground_sat(&m, cfg)? => Answer::Sat,
        Question::Sat => Answer::Unsat,
    };
    let mut v = Verdict::new(answer);
    v.elapsed = start.elapsed();
    Ok(v)
}
