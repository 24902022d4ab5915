use std::collections::HashMap;

use super::order::ReductionOrder;
use super::unify::{mgu, Substitution};
use crate::clause::{OrderClause, OrderLiteral};
use crate::oracle::{ground_clause_sat, OracleConfig};
use crate::term::{Origin, Symbol, Term, Var};

/// A conclusion together with the unifier that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inference {
    pub clause: OrderClause,
    pub unifier: Substitution,
}

/// `C ∪ {s < t}` gives `Cσ` with `σ = mgu(s, t)`, provided `sσ` is maximal
/// in the instantiated clause.
pub fn irreflexivity_resolution(c: &OrderClause, lit: usize, o: &ReductionOrder) -> Option<Inference> {
    let l = c.literals().get(lit)?;
    if !l.strict {
        return None;
    }
    let sigma = mgu(&[l.left.clone(), l.right.clone()])?;
    let s = sigma.apply(&l.left);
    let rest: Vec<OrderLiteral> = c
        .literals()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != lit)
        .map(|(_, l)| sigma.apply_literal(l))
        .collect();
    if rest.iter().any(|m| o.greater(&m.left, &s) || o.greater(&m.right, &s)) {
        return None;
    }
    Some(Inference {
        clause: OrderClause::new(rest),
        unifier: sigma,
    })
}

/// Renames the variables of `d` to `y1, y2, ...` avoiding those of `c`.
fn rename_apart(c: &OrderClause, d: &OrderClause) -> Vec<OrderLiteral> {
    let taken: Vec<Var> = c.vars();
    let mut map: HashMap<Var, Term> = HashMap::new();
    let mut next = 1;
    for v in d.vars() {
        let fresh = loop {
            let cand = Var::new(format!("y{next}"));
            next += 1;
            if !taken.contains(&cand) {
                break cand;
            }
        };
        map.insert(v, Term::Var(fresh));
    }
    d.literals()
        .iter()
        .map(|l| l.substitute(&|v: &Var| map.get(v).cloned()))
        .collect()
}

fn valid_selection(sel: &[usize], len: usize) -> bool {
    !sel.is_empty() && sel.iter().all(|&i| i < len) && sel.windows(2).all(|w| w[0] < w[1])
}

/// Factorized chaining of the literals `u_i ◁ s_i` selected in `c` with the
/// literals `t_j ◁ r_j` selected in `d` (a renamed copy of it), through
/// `m = s_1σ` where `σ` unifies all `s_i` and `t_j`. The conclusion is the
/// rest of both clauses plus `u_iσ ◁ r_jσ` for all `i, j`, strict when
/// either premise literal is.
///
/// Side conditions, all after `σ`: no `u_i` and no `r_j` is `⪰ m`; no side
/// of a remaining literal of `c` is `⪰ m`; in the remaining literals of `d`
/// no left side is `⪰ m` and a right side may equal `m` but not exceed it.
/// Selections are strictly increasing literal indices.
pub fn chaining(
    c: &OrderClause,
    c_sel: &[usize],
    d: &OrderClause,
    d_sel: &[usize],
    o: &ReductionOrder,
) -> Option<Inference> {
    if !valid_selection(c_sel, c.len()) || !valid_selection(d_sel, d.len()) {
        return None;
    }
    let dl = rename_apart(c, d);
    let cl = c.literals();
    let mut mids: Vec<Term> = c_sel.iter().map(|&i| cl[i].right.clone()).collect();
    mids.extend(d_sel.iter().map(|&j| dl[j].left.clone()));
    let sigma = mgu(&mids)?;
    let m = sigma.apply(&mids[0]);
    let ngeq = |t: &Term| o.not_greater_or_equal(t, &m);

    let us: Vec<(Term, bool)> = c_sel
        .iter()
        .map(|&i| (sigma.apply(&cl[i].left), cl[i].strict))
        .collect();
    let rs: Vec<(Term, bool)> = d_sel
        .iter()
        .map(|&j| (sigma.apply(&dl[j].right), dl[j].strict))
        .collect();
    if !us.iter().all(|(u, _)| ngeq(u)) || !rs.iter().all(|(r, _)| ngeq(r)) {
        return None;
    }
    let mut out = Vec::new();
    for (i, l) in cl.iter().enumerate() {
        if c_sel.contains(&i) {
            continue;
        }
        let l = sigma.apply_literal(l);
        if !ngeq(&l.left) || !ngeq(&l.right) {
            return None;
        }
        out.push(l);
    }
    for (j, l) in dl.iter().enumerate() {
        if d_sel.contains(&j) {
            continue;
        }
        let l = sigma.apply_literal(l);
        if !ngeq(&l.left) || !(l.right == m || ngeq(&l.right)) {
            return None;
        }
        out.push(l);
    }
    for (u, su) in &us {
        for (r, sr) in &rs {
            out.push(OrderLiteral {
                left: u.clone(),
                right: r.clone(),
                strict: *su || *sr,
            });
        }
    }
    Some(Inference {
        clause: OrderClause::new(out),
        unifier: sigma,
    })
}

/// Subsets of `group` that contain `seed` as their least element.
fn selections(seed: usize, group: &[usize]) -> Vec<Vec<usize>> {
    const MAX_FREE: usize = 8;
    let others: Vec<usize> = group.iter().copied().filter(|&k| k > seed).collect();
    if others.len() > MAX_FREE {
        let mut all = vec![seed];
        all.extend(&others);
        return vec![vec![seed], all];
    }
    let mut out = Vec::with_capacity(1 << others.len());
    for mask in 0u32..(1 << others.len()) {
        let mut s = vec![seed];
        s.extend(
            others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &k)| k),
        );
        out.push(s);
    }
    out
}

fn unifiable(a: &Term, b: &Term) -> bool {
    let mut s = Substitution::new();
    s.unify(a, b)
}

/// Every chaining inference with `c` as the left and `d` as the right premise.
pub(crate) fn all_chainings(
    c: &OrderClause,
    d: &OrderClause,
    o: &ReductionOrder,
) -> Vec<(Vec<usize>, Vec<usize>, Inference)> {
    let mut out = Vec::new();
    let cl = c.literals();
    let dl = rename_apart(c, d);
    let c_terms = c.basic_terms();
    let d_terms: Vec<&Term> = {
        let mut v: Vec<&Term> = Vec::new();
        for l in &dl {
            for t in [&l.left, &l.right] {
                if !v.contains(&t) {
                    v.push(t);
                }
            }
        }
        v
    };
    for (i, li) in cl.iter().enumerate() {
        let s = &li.right;
        if c_terms.iter().any(|t| o.greater(t, s)) {
            continue;
        }
        let c_group: Vec<usize> = (i..cl.len()).filter(|&k| unifiable(&cl[k].right, s)).collect();
        for (j, lj) in dl.iter().enumerate() {
            let t = &lj.left;
            if !unifiable(s, t) || d_terms.iter().any(|u| o.greater(u, t)) {
                continue;
            }
            let d_group: Vec<usize> = (j..dl.len()).filter(|&k| unifiable(&dl[k].left, t)).collect();
            for cs in selections(i, &c_group) {
                for ds in selections(j, &d_group) {
                    if let Some(inf) = chaining(c, &cs, d, &ds, o) {
                        out.push((cs.clone(), ds, inf));
                    }
                }
            }
        }
    }
    out
}

/// True for clauses valid in every total order: one containing `s <= s`,
/// or `s ◁ t` together with `t ◁' s` where at least one is non-strict.
pub fn is_tautology(c: &OrderClause) -> bool {
    let ls = c.literals();
    ls.iter().any(|l| !l.strict && l.left == l.right)
        || ls.iter().enumerate().any(|(i, a)| {
            ls[i + 1..]
                .iter()
                .any(|b| a.left == b.right && a.right == b.left && !(a.strict && b.strict))
        })
}

/// True for clauses that hold in every total order with least element `bot`
/// and greatest element `top`, distinct terms taking arbitrary values. Such
/// clauses follow from the endpoint axioms.
pub fn is_theory_tautology(c: &OrderClause) -> bool {
    const MAX_TERMS: usize = 6;
    if c.is_empty() || c.basic_terms().len() > MAX_TERMS {
        return false;
    }
    let frozen: HashMap<Var, Term> = c
        .vars()
        .into_iter()
        .map(|v| {
            let k = Term::constant(Symbol::new(format!("?{}", v.name()), 0, Origin::Constant));
            (v, k)
        })
        .collect();
    let negated: Vec<OrderClause> = c
        .literals()
        .iter()
        .map(|l| {
            let l = l.substitute(&|v: &Var| frozen.get(v).cloned());
            OrderClause::new(vec![OrderLiteral {
                left: l.right,
                right: l.left,
                strict: !l.strict,
            }])
        })
        .collect();
    let cfg = OracleConfig {
        max_atoms: MAX_TERMS,
        max_terms: MAX_TERMS,
    };
    ground_clause_sat(&negated, &cfg) == Ok(false)
}

/// Whether some instance of `c` has each literal in `d`, where `s < t` in
/// `c` may also cover `s <= t` in `d`. `c` must not have more literals.
pub fn subsumes(c: &OrderClause, d: &OrderClause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    fn go(cl: &[OrderLiteral], dl: &[OrderLiteral], sigma: &Substitution) -> bool {
        let Some((first, rest)) = cl.split_first() else {
            return true;
        };
        dl.iter().any(|t| {
            if !(first.strict == t.strict || first.strict) {
                return false;
            }
            let mut s = sigma.clone();
            s.match_term(&first.left, &t.left) && s.match_term(&first.right, &t.right) && go(rest, dl, &s)
        })
    }
    go(c.literals(), d.literals(), &Substitution::new())
}
