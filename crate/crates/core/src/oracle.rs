//! Exhaustive ground semantics.
//!
//! The value of a quantifier-free formula only depends on how the values of
//! its atoms are ordered relative to each other and to 0 and 1, so it is
//! enough to enumerate order types: ordered partitions of the atoms into
//! blocks, the first block sitting at 0 and the last at 1.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_rational::Rational64;
use thiserror::Error;

use crate::clause::OrderClause;
use crate::formula::{atoms_as_terms, Formula, PrenexFormula};
use crate::skolem::{herbrand_universe, tuples};
use crate::term::{Symbol, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_atoms: usize,
    pub max_terms: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_atoms: 7,
            max_terms: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} atoms exceed the cap of {cap}")]
    TooManyAtoms { count: usize, cap: usize },
    #[error("{count} terms exceed the cap of {cap}")]
    TooManyTerms { count: usize, cap: usize },
    #[error("no value for atom {0}")]
    MissingAtom(Term),
    #[error("not ground: {0}")]
    NonGround(String),
    #[error("prefix is not purely existential")]
    NotExistential,
}

/// Values of ground atoms. `top` and `bot` are fixed at 1 and 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    values: BTreeMap<Term, Rational64>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics unless `value` lies in `[0, 1]`.
    pub fn set(&mut self, atom: Term, value: Rational64) {
        assert!(
            value >= Rational64::from_integer(0) && value <= Rational64::from_integer(1),
            "value {value} outside [0, 1]"
        );
        self.values.insert(atom, value);
    }

    pub fn get(&self, atom: &Term) -> Option<Rational64> {
        if atom.is_top() {
            return Some(Rational64::from_integer(1));
        }
        if atom.is_bottom() {
            return Some(Rational64::from_integer(0));
        }
        self.values.get(atom).copied()
    }

    /// The order type this valuation induces on `atoms`.
    pub fn order_type(&self, atoms: &[Term]) -> Option<OrderType> {
        let mut by_value: BTreeMap<Rational64, Vec<Term>> = BTreeMap::new();
        by_value
            .entry(Rational64::from_integer(0))
            .or_default()
            .push(Term::bottom());
        by_value
            .entry(Rational64::from_integer(1))
            .or_default()
            .push(Term::top());
        for a in atoms {
            if a.is_endpoint() {
                continue;
            }
            by_value.entry(self.get(a)?).or_default().push(a.clone());
        }
        Some(OrderType {
            blocks: by_value.into_values().collect(),
        })
    }
}

/// An ordered partition of atoms with `bot` in the first block and `top` in
/// the last; consecutive blocks are strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderType {
    pub blocks: Vec<Vec<Term>>,
}

impl OrderType {
    /// The number of strict steps between `bot` and `top`.
    pub fn height(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn level(&self, t: &Term) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(t))
    }

    /// Block `i` gets the value `i / height`.
    pub fn valuation(&self) -> Valuation {
        let h = self.height() as i64;
        let mut v = Valuation::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for t in b {
                if !t.is_endpoint() {
                    v.set(t.clone(), Rational64::new(i as i64, h));
                }
            }
        }
        v
    }
}

/// Evaluates a quantifier-free formula over any totally ordered value set.
pub fn eval_in<V: Ord + Copy>(
    m: &Formula,
    zero: V,
    one: V,
    value: &impl Fn(&Term) -> Option<V>,
) -> Result<V, OracleError> {
    Ok(match m {
        Formula::Atom(a) => {
            let t = a.to_term();
            value(&t).ok_or(OracleError::MissingAtom(t))?
        }
        Formula::Top => one,
        Formula::Bottom => zero,
        Formula::And(l, r) => eval_in(l, zero, one, value)?.min(eval_in(r, zero, one, value)?),
        Formula::Or(l, r) => eval_in(l, zero, one, value)?.max(eval_in(r, zero, one, value)?),
        Formula::Implies(l, r) => {
            let (a, b) = (eval_in(l, zero, one, value)?, eval_in(r, zero, one, value)?);
            if a <= b {
                one
            } else {
                b
            }
        }
        Formula::Delta(g) => {
            if eval_in(g, zero, one, value)? == one {
                one
            } else {
                zero
            }
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            return Err(OracleError::NonGround(crate::io::render_formula(m)));
        }
    })
}

/// The exact value of a ground quantifier-free formula.
pub fn eval(m: &Formula, v: &Valuation) -> Result<Rational64, OracleError> {
    eval_in(m, Rational64::from_integer(0), Rational64::from_integer(1), &|t| {
        v.get(t)
    })
}

/// Calls `visit` with the levels of `n` items for every order type, the
/// endpoints at level 0 and `top`. `prune(k, levels, top)` is asked after the
/// first `k + 1` items are placed; returning false cuts the branch.
fn enumerate_levels(
    n: usize,
    prune: &mut impl FnMut(usize, &[u32], u32) -> bool,
    visit: &mut impl FnMut(&[u32], u32) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn go(
        k: usize,
        n: usize,
        levels: &mut Vec<u32>,
        top: u32,
        prune: &mut impl FnMut(usize, &[u32], u32) -> bool,
        visit: &mut impl FnMut(&[u32], u32) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == n {
            return visit(levels, top);
        }
        // join an existing block
        for r in 0..=top {
            levels.push(r);
            if prune(k, levels, top) {
                go(k + 1, n, levels, top, prune, visit)?;
            }
            levels.pop();
        }
        // open a new block above level r
        for r in 0..top {
            let shifted: Vec<u32> = levels.iter().map(|&l| if l > r { l + 1 } else { l }).collect();
            let saved = std::mem::replace(levels, shifted);
            levels.push(r + 1);
            let flow = if prune(k, levels, top + 1) {
                go(k + 1, n, levels, top + 1, prune, visit)
            } else {
                ControlFlow::Continue(())
            };
            *levels = saved;
            flow?;
        }
        ControlFlow::Continue(())
    }
    go(0, n, &mut Vec::with_capacity(n), 1, prune, visit)
}

fn atoms_of(m: &Formula, cfg: &OracleConfig) -> Result<Vec<Term>, OracleError> {
    let atoms: Vec<Term> = atoms_as_terms(m).into_iter().filter(|t| !t.is_endpoint()).collect();
    if atoms.len() > cfg.max_atoms {
        return Err(OracleError::TooManyAtoms {
            count: atoms.len(),
            cap: cfg.max_atoms,
        });
    }
    if let Some(t) = atoms.iter().find(|t| !t.is_ground()) {
        return Err(OracleError::NonGround(t.to_string()));
    }
    Ok(atoms)
}

/// Every order type over `atoms`, each exactly once.
pub fn order_types(atoms: &[Term], cfg: &OracleConfig) -> Result<Vec<OrderType>, OracleError> {
    let atoms: Vec<Term> = {
        let mut v: Vec<Term> = Vec::new();
        for a in atoms {
            if !a.is_endpoint() && !v.contains(a) {
                v.push(a.clone());
            }
        }
        v
    };
    if atoms.len() > cfg.max_atoms {
        return Err(OracleError::TooManyAtoms {
            count: atoms.len(),
            cap: cfg.max_atoms,
        });
    }
    let mut out = Vec::new();
    let _ = enumerate_levels(atoms.len(), &mut |_, _, _| true, &mut |levels, top| {
        let mut blocks = vec![Vec::new(); top as usize + 1];
        blocks[0].push(Term::bottom());
        blocks[top as usize].push(Term::top());
        for (a, &l) in atoms.iter().zip(levels) {
            blocks[l as usize].push(a.clone());
        }
        out.push(OrderType { blocks });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Looks for an order type on which `m` does (`want_one`) or does not take
/// the value 1.
fn find_value(m: &Formula, cfg: &OracleConfig, want_one: bool) -> Result<bool, OracleError> {
    let atoms = atoms_of(m, cfg)?;
    let index: BTreeMap<&Term, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut error = None;
    let flow = enumerate_levels(atoms.len(), &mut |_, _, _| true, &mut |levels, top| {
        let lookup = |t: &Term| {
            if t.is_bottom() {
                Some(0)
            } else if t.is_top() {
                Some(top)
            } else {
                index.get(t).map(|&i| levels[i])
            }
        };
        match eval_in(m, 0u32, top, &lookup) {
            Ok(v) if (v == top) == want_one => ControlFlow::Break(()),
            Ok(_) => ControlFlow::Continue(()),
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(flow.is_break())
}

/// Value 1 under every order type.
pub fn ground_valid(m: &Formula, cfg: &OracleConfig) -> Result<bool, OracleError> {
    find_value(m, cfg, false).map(|found| !found)
}

/// Value 1 under some order type.
pub fn ground_sat(m: &Formula, cfg: &OracleConfig) -> Result<bool, OracleError> {
    find_value(m, cfg, true)
}

/// Whether some order type over the clauses' terms, with `bot` least, `top`
/// greatest and `bot < top`, satisfies every clause. Terms are opaque:
/// distinct terms may take any values.
pub fn ground_clause_sat(cs: &[OrderClause], cfg: &OracleConfig) -> Result<bool, OracleError> {
    let mut terms: Vec<Term> = Vec::new();
    for c in cs {
        if !c.is_ground() {
            return Err(OracleError::NonGround(c.to_string()));
        }
        for t in c.basic_terms() {
            if !t.is_endpoint() && !terms.contains(t) {
                terms.push(t.clone());
            }
        }
    }
    if terms.len() > cfg.max_terms {
        return Err(OracleError::TooManyTerms {
            count: terms.len(),
            cap: cfg.max_terms,
        });
    }
    if cs.iter().any(|c| c.is_empty()) {
        return Ok(false);
    }

    // Literal sides as indices: 0 = bot, 1 = top, 2.. = terms.
    let side = |t: &Term| -> usize {
        if t.is_bottom() {
            0
        } else if t.is_top() {
            1
        } else {
            2 + terms.iter().position(|u| u == t).expect("collected")
        }
    };
    let clauses: Vec<Vec<(usize, usize, bool)>> = cs
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .map(|l| (side(&l.left), side(&l.right), l.strict))
                .collect()
        })
        .collect();

    // Greedy placement order: next the term that completes most clauses.
    let n = terms.len();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n + 2];
    placed[0] = true;
    placed[1] = true;
    while order.len() < n {
        let score = |cand: usize| {
            let mut done = 0usize;
            let mut touch = 0usize;
            for c in &clauses {
                let mentions = c.iter().any(|&(a, b, _)| a == cand || b == cand);
                if !mentions {
                    continue;
                }
                touch += 1;
                if c.iter()
                    .all(|&(a, b, _)| (placed[a] || a == cand) && (placed[b] || b == cand))
                {
                    done += 1;
                }
            }
            (done, touch)
        };
        let best = (2..n + 2)
            .filter(|&i| !placed[i])
            .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("unplaced term");
        placed[best] = true;
        order.push(best);
    }
    // position of each side index in the placement order
    let mut slot = vec![usize::MAX; n + 2];
    for (k, &i) in order.iter().enumerate() {
        slot[i] = k;
    }
    // clauses grouped by the step that completes them
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n.max(1)];
    let mut ready: Vec<usize> = Vec::new();
    for (ci, c) in clauses.iter().enumerate() {
        let last = c
            .iter()
            .flat_map(|&(a, b, _)| [a, b])
            .filter(|&i| i >= 2)
            .map(|i| slot[i])
            .max();
        match last {
            Some(k) => due[k].push(ci),
            None => ready.push(ci),
        }
    }
    let holds = |ci: usize, levels: &[u32], top: u32| {
        let lv = |i: usize| match i {
            0 => 0,
            1 => top,
            _ => levels[slot[i]],
        };
        clauses[ci].iter().any(|&(a, b, strict)| {
            let (x, y) = (lv(a), lv(b));
            if strict {
                x < y
            } else {
                x <= y
            }
        })
    };
    if !ready.iter().all(|&ci| holds(ci, &[], 1)) {
        return Ok(false);
    }
    let flow = enumerate_levels(
        n,
        &mut |k, levels, top| due[k].iter().all(|&ci| holds(ci, levels, top)),
        &mut |_, _| ControlFlow::Break(()),
    );
    Ok(flow.is_break())
}

/// Searches for a valid disjunction of ground instances of an existential
/// prenex formula, over Herbrand terms up to `depth` and disjunctions of up
/// to `width` instances. Depth is the outer loop. Candidate disjunctions
/// with more atoms than the oracle cap are skipped.
pub fn herbrand_validity_search(
    sk: &PrenexFormula,
    depth: usize,
    width: usize,
    cfg: &OracleConfig,
) -> Result<Option<Vec<Vec<Term>>>, OracleError> {
    if !sk.is_existential() {
        return Err(OracleError::NotExistential);
    }
    let vars: Vec<Var> = sk.existential_vars();
    let mut sig: Vec<Symbol> = sk.matrix.predicates();
    sig.extend(sk.matrix.function_symbols());
    for d in 0..=depth {
        let universe = herbrand_universe(&sig, d);
        let insts: Vec<Vec<Term>> = tuples(&universe, vars.len());
        let is_new = |t: &Vec<Term>| d == 0 || t.iter().any(|x| x.depth() == d);
        let bodies: Vec<Formula> = insts
            .iter()
            .map(|inst| {
                let map: BTreeMap<&Var, &Term> = vars.iter().zip(inst).collect();
                sk.matrix.substitute(&|v: &Var| map.get(v).map(|t| (*t).clone()))
            })
            .collect();
        for w in 1..=width.min(insts.len()) {
            let mut found = None;
            for_each_combination(insts.len(), w, &mut |idx| {
                if !idx.iter().any(|&i| is_new(&insts[i])) {
                    return ControlFlow::Continue(());
                }
                let disj = idx[1..]
                    .iter()
                    .fold(bodies[idx[0]].clone(), |acc, &i| Formula::or(acc, bodies[i].clone()));
                match ground_valid(&disj, cfg) {
                    Ok(true) => {
                        found = Some(Ok(idx.iter().map(|&i| insts[i].clone()).collect()));
                        ControlFlow::Break(())
                    }
                    Ok(false) | Err(OracleError::TooManyAtoms { .. }) => ControlFlow::Continue(()),
                    Err(e) => {
                        found = Some(Err(e));
                        ControlFlow::Break(())
                    }
                }
            });
            if let Some(r) = found {
                return r.map(Some);
            }
        }
    }
    Ok(None)
}

fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> ControlFlow<()>) {
    fn go(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f)?;
            cur.pop();
        }
        ControlFlow::Continue(())
    }
    let _ = go(0, n, k, &mut Vec::with_capacity(k), f);
}
