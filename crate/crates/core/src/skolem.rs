//! Quantifier elimination: validity Skolemization, SAT-Skolemization with a
//! guard predicate, the `Hex` construction, dual Skolemization of Δ-prefixed
//! formulas, Herbrand universes and de-Skolemization.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::formula::{Formula, PrenexFormula, Quantifier};
use crate::term::{Origin, Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SkolemError {
    #[error("matrix is not of the form D(B)")]
    NotDeltaPrefixed,
    #[error("malformed Herbrand witness: {0}")]
    MalformedWitness(String),
}

/// Hands out symbol names that collide neither with the input nor with each
/// other. The counter only grows, so runs are reproducible.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: HashSet<String>,
    counter: usize,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply that avoids every symbol and variable name in `fs`.
    pub fn for_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut s = Self::new();
        for f in fs {
            s.reserve_formula(f);
        }
        s
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        for p in f.predicates() {
            self.reserve(p.name());
        }
        for s in f.function_symbols() {
            self.reserve(s.name());
        }
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `prefix1`, `prefix2`, ... numbered by the shared counter.
    pub fn numbered(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{prefix}{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    /// `base` itself if still free, otherwise `base_1`, `base_2`, ...
    pub fn named(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        let mut i = 1;
        loop {
            let name = format!("{base}_{i}");
            if self.used.insert(name.clone()) {
                return name;
            }
            i += 1;
        }
    }
}

/// Symbols introduced by a Skolemization step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkolemSignature {
    pub symbols: Vec<Symbol>,
    /// For each eliminated variable: its prefix position and the Skolem term
    /// that replaced it.
    pub witnesses: Vec<(usize, Term)>,
}

impl SkolemSignature {
    pub fn witness_at(&self, position: usize) -> Option<&Term> {
        self.witnesses.iter().find(|(p, _)| *p == position).map(|(_, t)| t)
    }
}

fn var_terms(vs: &[Var]) -> Vec<Term> {
    vs.iter().cloned().map(Term::Var).collect()
}

/// Replaces every universal variable by a term over the existential
/// variables to its left; the result has a purely existential prefix.
pub fn skolemize_validity(a: &PrenexFormula, names: &mut NameSupply) -> (PrenexFormula, SkolemSignature) {
    let mut sig = SkolemSignature::default();
    let mut exists: Vec<Var> = Vec::new();
    let mut map: BTreeMap<Var, Term> = BTreeMap::new();
    for (position, (q, v)) in a.prefix.iter().enumerate() {
        match q {
            Quantifier::Exists => exists.push(v.clone()),
            Quantifier::Forall => {
                let f = Symbol::new(names.numbered("sk_v_"), exists.len(), Origin::Skolem { position });
                let t = Term::app(f.clone(), var_terms(&exists));
                sig.symbols.push(f);
                sig.witnesses.push((position, t.clone()));
                map.insert(v.clone(), t);
            }
        }
    }
    let matrix = a.matrix.substitute(&|v: &Var| map.get(v).cloned());
    let prefix = exists.into_iter().map(|v| (Quantifier::Exists, v)).collect();
    (PrenexFormula { prefix, matrix }, sig)
}

/// The fresh monadic guard predicate.
pub fn guard_symbol(names: &mut NameSupply) -> Symbol {
    Symbol::new(names.named("q0"), 1, Origin::Guard)
}

/// `skq(a) = A x̄ D(q(x1) -> ... -> (q(xn) -> M'))`: each existential `x`
/// becomes a universal guarded by `q(x)`, and its occurrences in the matrix
/// become `f(x, ȳ)` with `ȳ` the universals to its left in prefix order.
pub fn skolemize_sat(a: &PrenexFormula, q: &Symbol, names: &mut NameSupply) -> (PrenexFormula, SkolemSignature) {
    let mut sig = SkolemSignature::default();
    let mut seen: Vec<Var> = Vec::new();
    let mut guarded: Vec<Var> = Vec::new();
    let mut map: BTreeMap<Var, Term> = BTreeMap::new();
    for (position, (quant, v)) in a.prefix.iter().enumerate() {
        if *quant == Quantifier::Exists {
            let mut args = vec![Term::Var(v.clone())];
            args.extend(var_terms(&seen));
            let f = Symbol::new(names.numbered("sk_s_"), args.len(), Origin::SatSkolem);
            let t = Term::app(f.clone(), args);
            sig.symbols.push(f);
            sig.witnesses.push((position, t.clone()));
            map.insert(v.clone(), t);
            guarded.push(v.clone());
        }
        seen.push(v.clone());
    }
    let body = a.matrix.substitute(&|v: &Var| map.get(v).cloned());
    let body = guarded.iter().rev().fold(body, |acc, x| {
        Formula::implies(Formula::atom(q.clone(), vec![Term::Var(x.clone())]), acc)
    });
    let prefix = a.prefix.iter().map(|(_, v)| (Quantifier::Forall, v.clone())).collect();
    (
        PrenexFormula {
            prefix,
            matrix: Formula::delta(body),
        },
        sig,
    )
}

/// `A ⊴ B`, i.e. `D(A -> B)`.
pub fn weak_below(a: Formula, b: Formula) -> Formula {
    Formula::delta(Formula::implies(a, b))
}

/// `A ⊲ B`, i.e. `~D(B -> A)`.
pub fn strictly_below(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::delta(Formula::implies(b, a)))
}

/// One closed conjunct `A ȳ (top ⊴ p(ȳ) | p(ȳ) ⊲ q(f_p(ȳ)))` per predicate,
/// together with the witness symbols `f_p`.
pub fn hex(q: &Symbol, predicates: &[Symbol], names: &mut NameSupply) -> (Vec<Formula>, Vec<Symbol>) {
    let mut out = Vec::new();
    let mut syms = Vec::new();
    for p in predicates {
        let ys: Vec<Var> = (1..=p.arity()).map(|i| Var::new(format!("y{i}"))).collect();
        let f = Symbol::new(
            names.named(&format!("hexw_{}", p.name())),
            p.arity(),
            Origin::HexWitness,
        );
        let pa = Formula::atom(p.clone(), var_terms(&ys));
        let qa = Formula::atom(q.clone(), vec![Term::app(f.clone(), var_terms(&ys))]);
        let body = Formula::or(weak_below(Formula::Top, pa.clone()), strictly_below(pa, qa));
        out.push(ys.into_iter().rev().fold(body, |acc, y| Formula::forall(y, acc)));
        syms.push(f);
    }
    (out, syms)
}

/// Standard Skolemization of `Q x̄ D(B)`: each existential becomes a term
/// over the universals to its left.
pub fn skolemize_sat_delta(
    a: &PrenexFormula,
    names: &mut NameSupply,
) -> Result<(PrenexFormula, SkolemSignature), SkolemError> {
    if !matches!(a.matrix, Formula::Delta(_)) {
        return Err(SkolemError::NotDeltaPrefixed);
    }
    let mut sig = SkolemSignature::default();
    let mut foralls: Vec<Var> = Vec::new();
    let mut map: BTreeMap<Var, Term> = BTreeMap::new();
    for (position, (q, v)) in a.prefix.iter().enumerate() {
        match q {
            Quantifier::Forall => foralls.push(v.clone()),
            Quantifier::Exists => {
                let f = Symbol::new(names.numbered("sk_s_"), foralls.len(), Origin::SatSkolem);
                let t = Term::app(f.clone(), var_terms(&foralls));
                sig.symbols.push(f);
                sig.witnesses.push((position, t.clone()));
                map.insert(v.clone(), t);
            }
        }
    }
    let matrix = a.matrix.substitute(&|v: &Var| map.get(v).cloned());
    let prefix = foralls.into_iter().map(|v| (Quantifier::Forall, v)).collect();
    Ok((PrenexFormula { prefix, matrix }, sig))
}

fn is_predicate_origin(o: Origin) -> bool {
    matches!(o, Origin::Predicate | Origin::Guard | Origin::Definitional)
}

/// Ground terms of depth at most `depth` over the function and constant
/// symbols of `signature` (predicates are ignored). A constant `c` and a
/// unary `f` are added when the signature has no constant, respectively no
/// function symbol of positive arity. Shallower terms come first.
pub fn herbrand_universe(signature: &[Symbol], depth: usize) -> Vec<Term> {
    let mut names = NameSupply::new();
    for s in signature {
        names.reserve(s.name());
    }
    let mut funs: Vec<Symbol> = Vec::new();
    for s in signature {
        if !is_predicate_origin(s.origin()) && !s.is_endpoint() && !funs.contains(s) {
            funs.push(s.clone());
        }
    }
    if !funs.iter().any(|s| s.arity() == 0) {
        funs.insert(0, Symbol::new(names.named("c"), 0, Origin::Constant));
    }
    if !funs.iter().any(|s| s.arity() > 0) {
        funs.push(Symbol::new(names.named("f"), 1, Origin::Function));
    }
    let mut out: Vec<Term> = funs
        .iter()
        .filter(|s| s.arity() == 0)
        .map(|s| Term::constant(s.clone()))
        .collect();
    for d in 1..=depth {
        let prev = out.clone();
        let mut layer = Vec::new();
        for f in funs.iter().filter(|s| s.arity() > 0) {
            for args in tuples(&prev, f.arity()) {
                if args.iter().any(|a| a.depth() == d - 1) {
                    layer.push(Term::app(f.clone(), args));
                }
            }
        }
        out.extend(layer);
    }
    out
}

/// All `k`-tuples over `items` in lexicographic index order.
pub fn tuples<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for t in &out {
            for x in items {
                let mut u = t.clone();
                u.push(x.clone());
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// A disjunction of ground instances of a validity-Skolemized formula,
/// with enough bookkeeping to undo the Skolemization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandDisjunction {
    pub original: PrenexFormula,
    pub skolemized: PrenexFormula,
    pub signature: SkolemSignature,
    /// One tuple per disjunct, assigning the existential variables of
    /// `skolemized` in prefix order.
    pub instances: Vec<Vec<Term>>,
}

impl HerbrandDisjunction {
    /// The ground disjunction itself.
    pub fn disjunction(&self) -> Formula {
        let vars = self.skolemized.existential_vars();
        let mut it = self.instances.iter().map(|inst| {
            let map: BTreeMap<&Var, &Term> = vars.iter().zip(inst).collect();
            self.skolemized
                .matrix
                .substitute(&|v: &Var| map.get(v).map(|t| (*t).clone()))
        });
        let first = it.next().unwrap_or(Formula::Bottom);
        it.fold(first, Formula::or)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Disjunct {
    /// Terms for the first `terms.len()` prefix positions; the remaining
    /// positions are quantified again.
    terms: Vec<Term>,
}

fn skolem_position(t: &Term) -> Option<usize> {
    match t.head()?.origin() {
        Origin::Skolem { position } => Some(position),
        _ => None,
    }
}

/// `s ⊲ t`: `s` is a proper subterm of `t` or replaces an earlier variable.
fn skolem_below(s: &Term, t: &Term) -> bool {
    if s != t && t.contains(s) {
        return true;
    }
    matches!((skolem_position(s), skolem_position(t)), (Some(i), Some(j)) if i < j)
}

/// Re-introduces the original quantifier prefix into a Herbrand disjunction
/// by alternating the three steps: existential introduction, contraction of
/// identical disjuncts, universal introduction at a maximal Skolem term.
pub fn deskolemize(h: &HerbrandDisjunction) -> Result<Formula, SkolemError> {
    let prefix = &h.original.prefix;
    let n = prefix.len();
    let evars = h.skolemized.existential_vars();
    let bad = |m: String| Err(SkolemError::MalformedWitness(m));

    // The original matrix, read back off the Skolemized one.
    let zs: Vec<Var> = prefix.iter().map(|(_, v)| v.clone()).collect();
    let matrix = unskolemize(&h.skolemized.matrix, &zs);

    let mut current: Vec<Disjunct> = Vec::new();
    for inst in &h.instances {
        if inst.len() != evars.len() {
            return bad(format!("instance has {} terms, expected {}", inst.len(), evars.len()));
        }
        let emap: BTreeMap<&Var, &Term> = evars.iter().zip(inst).collect();
        let mut terms = Vec::with_capacity(n);
        for (pos, (q, v)) in prefix.iter().enumerate() {
            let t = match q {
                Quantifier::Exists => match emap.get(v) {
                    Some(t) => (*t).clone(),
                    None => return bad(format!("no instance term for `{v}`")),
                },
                Quantifier::Forall => match h.signature.witness_at(pos) {
                    Some(w) => w.substitute(&|x: &Var| emap.get(x).map(|t| (*t).clone())),
                    None => return bad(format!("no Skolem term for `{v}`")),
                },
            };
            terms.push(t);
        }
        current.push(Disjunct { terms });
    }
    if current.is_empty() {
        return bad("empty disjunction".into());
    }

    for _ in 0..=(n * current.len() + 1) {
        // Step 1.
        for d in &mut current {
            while let Some(k) = d.terms.len().checked_sub(1) {
                if prefix[k].0 != Quantifier::Exists {
                    break;
                }
                d.terms.pop();
            }
        }
        // Step 2.
        let mut seen = HashSet::new();
        current.retain(|d| seen.insert(d.clone()));
        if current.iter().all(|d| d.terms.is_empty()) {
            break;
        }
        // Step 3.
        let mut skt: Vec<&Term> = Vec::new();
        for d in &current {
            for t in &d.terms {
                for s in t.subterms() {
                    if skolem_position(s).is_some() && !skt.contains(&s) {
                        skt.push(s);
                    }
                }
            }
        }
        let mut maximal: Vec<&Term> = skt
            .iter()
            .copied()
            .filter(|s| !skt.iter().any(|t| skolem_below(s, t)))
            .collect();
        maximal.sort_by_cached_key(|t| t.to_string());
        let Some(t) = maximal.first().map(|t| (*t).clone()) else {
            return bad("no maximal Skolem term".into());
        };
        let holders: Vec<usize> = (0..current.len())
            .filter(|&i| current[i].terms.iter().any(|u| u.contains(&t)))
            .collect();
        if holders.len() != 1 {
            return bad(format!("maximal Skolem term {t} occurs in {} disjuncts", holders.len()));
        }
        let d = &mut current[holders[0]];
        let k = d.terms.len() - 1;
        if prefix[k].0 != Quantifier::Forall || d.terms[k] != t || d.terms[..k].iter().any(|u| u.contains(&t)) {
            return bad(format!(
                "maximal Skolem term {t} does not stand for the next universal variable"
            ));
        }
        d.terms.pop();
    }
    if !current.iter().all(|d| d.terms.is_empty()) {
        return bad("prefix not restored".into());
    }

    let rebuild = |d: &Disjunct| {
        let k = d.terms.len();
        let map: BTreeMap<&Var, &Term> = zs.iter().zip(&d.terms).collect();
        let body = matrix.substitute(&|v: &Var| map.get(v).map(|t| (*t).clone()));
        prefix[k..]
            .iter()
            .rev()
            .fold(body, |acc, (q, v)| Formula::quantified(*q, v.clone(), acc))
    };
    let mut it = current.iter().map(rebuild);
    let first = it.next().expect("nonempty");
    Ok(it.fold(first, Formula::or))
}

/// Replaces each Skolem term by the variable at its prefix position.
fn unskolemize(f: &Formula, zs: &[Var]) -> Formula {
    fn term(t: &Term, zs: &[Var]) -> Term {
        if let Some(p) = skolem_position(t) {
            if let Some(z) = zs.get(p) {
                return Term::Var(z.clone());
            }
        }
        match t {
            Term::Var(_) => t.clone(),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| term(a, zs)).collect()),
        }
    }
    match f {
        Formula::Atom(a) => Formula::atom(a.pred.clone(), a.args.iter().map(|t| term(t, zs)).collect()),
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::And(l, r) => Formula::and(unskolemize(l, zs), unskolemize(r, zs)),
        Formula::Or(l, r) => Formula::or(unskolemize(l, zs), unskolemize(r, zs)),
        Formula::Implies(l, r) => Formula::implies(unskolemize(l, zs), unskolemize(r, zs)),
        Formula::Delta(g) => Formula::delta(unskolemize(g, zs)),
        Formula::Forall(v, g) => Formula::forall(v.clone(), unskolemize(g, zs)),
        Formula::Exists(v, g) => Formula::exists(v.clone(), unskolemize(g, zs)),
    }
}
