//! Formulas of Gödel logic with the projection operator Δ.
//!
//! [`SurfaceFormula`] is what the parser produces and still contains the
//! abbreviations `~A` and `A <-> B`. Everything downstream works on
//! [`Formula`], which only has the five connectives ∧, ∨, →, Δ and the
//! quantifiers, plus the truth constants.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(pred.arity(), args.len(), "predicate `{}` arity mismatch", pred.name());
        Atom { pred, args }
    }

    /// The atom read as a term, its predicate acting as a function symbol.
    pub fn to_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    pub fn substitute<F: Fn(&Var) -> Option<Term>>(&self, f: &F) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.substitute(f)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Bottom,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Delta(Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Parser output: [`Formula`] plus negation and bi-implication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceFormula {
    Atom(Atom),
    Bottom,
    Top,
    Not(Box<SurfaceFormula>),
    And(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Or(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Implies(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Iff(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Delta(Box<SurfaceFormula>),
    Forall(Var, Box<SurfaceFormula>),
    Exists(Var, Box<SurfaceFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("formula is not in prenex form: a quantifier occurs below a connective")]
    NotPrenex,
    #[error("formula is not closed; free variables: {}", .0.join(", "))]
    NotClosed(Vec<String>),
}

impl Formula {
    pub fn atom(pred: Symbol, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn delta(f: Formula) -> Self {
        Formula::Delta(Box::new(f))
    }

    /// `~A`, i.e. `A -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::implies(f, Formula::Bottom)
    }

    /// `A <-> B`, i.e. `(A -> B) & (B -> A)`.
    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Exists(v, Box::new(body))
    }

    pub fn quantified(q: Quantifier, v: Var, body: Formula) -> Self {
        match q {
            Quantifier::Forall => Formula::forall(v, body),
            Quantifier::Exists => Formula::exists(v, body),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Top | Formula::Bottom)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => true,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.is_quantifier_free() && r.is_quantifier_free()
            }
            Formula::Delta(f) => f.is_quantifier_free(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Number of connective, quantifier and atom nodes plus term symbols.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => 1 + a.args.iter().map(Term::size).sum::<usize>(),
            Formula::Top | Formula::Bottom => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => 1 + l.size() + r.size(),
            Formula::Delta(f) => 1 + f.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
        }
    }

    /// Variables of a quantifier-free formula in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Formula::Atom(a) => a.args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Top | Formula::Bottom => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Delta(f) => f.collect_vars(out),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
                f.collect_vars(out);
            }
        }
    }

    /// Atoms in order of first occurrence, without repetition.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
        });
        out
    }

    /// Predicate symbols in order of first occurrence.
    pub fn predicates(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for a in self.atoms() {
            if !out.contains(&a.pred) {
                out.push(a.pred);
            }
        }
        out
    }

    /// Function and constant symbols of the atoms' arguments.
    pub fn function_symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for a in self.atoms() {
            a.args.iter().for_each(|t| t.collect_symbols(&mut out));
        }
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a, F: FnMut(&'a Formula)>(&'a self, f: &mut F) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Formula::Delta(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
        }
    }

    /// Substitutes free variables. Bound variables are never touched, and the
    /// substituted terms must not contain variables bound in `self`; both
    /// hold for prenex matrices, which is the only place this is used.
    pub fn substitute<F: Fn(&Var) -> Option<Term>>(&self, f: &F) -> Formula {
        self.substitute_dyn(f)
    }

    fn substitute_dyn(&self, f: &dyn Fn(&Var) -> Option<Term>) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.substitute(&f)),
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::And(l, r) => Formula::and(l.substitute_dyn(f), r.substitute_dyn(f)),
            Formula::Or(l, r) => Formula::or(l.substitute_dyn(f), r.substitute_dyn(f)),
            Formula::Implies(l, r) => Formula::implies(l.substitute_dyn(f), r.substitute_dyn(f)),
            Formula::Delta(g) => Formula::delta(g.substitute_dyn(f)),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let inner = |w: &Var| if w == v { None } else { f(w) };
                let body = g.substitute_dyn(&inner);
                match self {
                    Formula::Forall(..) => Formula::forall(v.clone(), body),
                    _ => Formula::exists(v.clone(), body),
                }
            }
        }
    }

    pub fn replace_var(&self, v: &Var, by: &Term) -> Formula {
        self.substitute(&|w: &Var| (w == v).then(|| by.clone()))
    }

    /// Renames bound variables so that every quantifier binds a distinct name
    /// that also differs from every free variable.
    pub fn rename_bound_apart(&self) -> Formula {
        let mut used: HashSet<String> = HashSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                for t in &a.args {
                    for v in t.vars() {
                        used.insert(v.name().to_string());
                    }
                }
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                used.insert(v.name().to_string());
            }
            _ => {}
        });
        let free: HashSet<String> = free_vars(self).into_iter().map(|v| v.name().to_string()).collect();
        let mut bound_once: HashSet<String> = HashSet::new();
        self.rename_rec(&free, &mut bound_once, &mut used)
    }

    fn rename_rec(&self, free: &HashSet<String>, bound: &mut HashSet<String>, used: &mut HashSet<String>) -> Formula {
        match self {
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(self, Formula::Forall(..)) {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let (nv, body) = if free.contains(v.name()) || bound.contains(v.name()) {
                    let fresh = fresh_name(v.name(), used);
                    let nv = Var::new(fresh.as_str());
                    (nv.clone(), body.replace_var(v, &Term::Var(nv)))
                } else {
                    (v.clone(), (**body).clone())
                };
                bound.insert(nv.name().to_string());
                Formula::quantified(q, nv, body.rename_rec(free, bound, used))
            }
            Formula::And(l, r) => Formula::and(l.rename_rec(free, bound, used), r.rename_rec(free, bound, used)),
            Formula::Or(l, r) => Formula::or(l.rename_rec(free, bound, used), r.rename_rec(free, bound, used)),
            Formula::Implies(l, r) => {
                Formula::implies(l.rename_rec(free, bound, used), r.rename_rec(free, bound, used))
            }
            Formula::Delta(g) => Formula::delta(g.rename_rec(free, bound, used)),
            _ => self.clone(),
        }
    }
}

fn fresh_name(base: &str, used: &mut HashSet<String>) -> String {
    let mut i = 1;
    loop {
        let cand = format!("{base}_{i}");
        if used.insert(cand.clone()) {
            return cand;
        }
        i += 1;
    }
}

impl From<Formula> for SurfaceFormula {
    fn from(f: Formula) -> Self {
        let b = |g: Box<Formula>| Box::new(SurfaceFormula::from(*g));
        match f {
            Formula::Atom(a) => SurfaceFormula::Atom(a),
            Formula::Bottom => SurfaceFormula::Bottom,
            Formula::Top => SurfaceFormula::Top,
            Formula::And(l, r) => SurfaceFormula::And(b(l), b(r)),
            Formula::Or(l, r) => SurfaceFormula::Or(b(l), b(r)),
            Formula::Implies(l, r) => SurfaceFormula::Implies(b(l), b(r)),
            Formula::Delta(g) => SurfaceFormula::Delta(b(g)),
            Formula::Forall(v, g) => SurfaceFormula::Forall(v, b(g)),
            Formula::Exists(v, g) => SurfaceFormula::Exists(v, b(g)),
        }
    }
}

/// Rewrites `~A` to `A -> bot` and `A <-> B` to `(A -> B) & (B -> A)`.
pub fn expand_abbreviations(f: &SurfaceFormula) -> Formula {
    use SurfaceFormula as S;
    match f {
        S::Atom(a) => Formula::Atom(a.clone()),
        S::Bottom => Formula::Bottom,
        S::Top => Formula::Top,
        S::Not(g) => Formula::not(expand_abbreviations(g)),
        S::And(l, r) => Formula::and(expand_abbreviations(l), expand_abbreviations(r)),
        S::Or(l, r) => Formula::or(expand_abbreviations(l), expand_abbreviations(r)),
        S::Implies(l, r) => Formula::implies(expand_abbreviations(l), expand_abbreviations(r)),
        S::Iff(l, r) => Formula::iff(expand_abbreviations(l), expand_abbreviations(r)),
        S::Delta(g) => Formula::delta(expand_abbreviations(g)),
        S::Forall(v, g) => Formula::forall(v.clone(), expand_abbreviations(g)),
        S::Exists(v, g) => Formula::exists(v.clone(), expand_abbreviations(g)),
    }
}

pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    free_vars_rec(f, &mut Vec::new(), &mut out);
    out
}

fn free_vars_rec(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Atom(a) => {
            for t in &a.args {
                for v in t.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
        }
        Formula::Top | Formula::Bottom => {}
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            free_vars_rec(l, bound, out);
            free_vars_rec(r, bound, out);
        }
        Formula::Delta(g) => free_vars_rec(g, bound, out),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            bound.push(v.clone());
            free_vars_rec(g, bound, out);
            bound.pop();
        }
    }
}

/// A closed formula `Q1 x1 ... Qn xn M` with quantifier-free `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrenexFormula {
    pub prefix: Vec<(Quantifier, Var)>,
    pub matrix: Formula,
}

impl PrenexFormula {
    pub fn to_formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |body, (q, v)| {
            Formula::quantified(*q, v.clone(), body)
        })
    }

    pub fn existential_vars(&self) -> Vec<Var> {
        self.vars_with(Quantifier::Exists)
    }

    pub fn universal_vars(&self) -> Vec<Var> {
        self.vars_with(Quantifier::Forall)
    }

    fn vars_with(&self, q: Quantifier) -> Vec<Var> {
        self.prefix
            .iter()
            .filter(|(p, _)| *p == q)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Exists)
    }

    pub fn is_universal(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Forall)
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::render_formula(&self.to_formula()))
    }
}

/// Splits a closed prenex formula into its quantifier prefix and matrix.
pub fn to_prenex_decomposition(f: &Formula) -> Result<PrenexFormula, FormulaError> {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Forall(v, body) => {
                prefix.push((Quantifier::Forall, v.clone()));
                cur = body;
            }
            Formula::Exists(v, body) => {
                prefix.push((Quantifier::Exists, v.clone()));
                cur = body;
            }
            _ => break,
        }
    }
    if !cur.is_quantifier_free() {
        return Err(FormulaError::NotPrenex);
    }
    let free = free_vars(f);
    if !free.is_empty() {
        return Err(FormulaError::NotClosed(
            free.iter().map(|v| v.name().to_string()).collect(),
        ));
    }
    Ok(PrenexFormula {
        prefix,
        matrix: cur.clone(),
    })
}

/// Non-atomic subformulas of a quantifier-free formula, children before
/// parents, each syntactically distinct subformula once.
pub fn subformulas(m: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    subformulas_rec(m, &mut out, &mut seen);
    out
}

fn subformulas_rec(f: &Formula, out: &mut Vec<Formula>, seen: &mut HashSet<Formula>) {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bottom => return,
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            subformulas_rec(l, out, seen);
            subformulas_rec(r, out, seen);
        }
        Formula::Delta(g) => subformulas_rec(g, out, seen),
        Formula::Forall(..) | Formula::Exists(..) => {
            panic!("subformulas: quantifier in a matrix")
        }
    }
    if seen.insert(f.clone()) {
        out.push(f.clone());
    }
}

/// The atoms of a quantifier-free formula read as terms; `top`/`bot` become
/// the endpoint constants.
pub fn atoms_as_terms(m: &Formula) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    m.visit(&mut |f| match f {
        Formula::Atom(a) => {
            out.insert(a.to_term());
        }
        Formula::Top => {
            out.insert(Term::top());
        }
        Formula::Bottom => {
            out.insert(Term::bottom());
        }
        _ => {}
    });
    out
}
