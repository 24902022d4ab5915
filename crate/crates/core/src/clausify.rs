//! Structural translation of quantifier-free matrices into order clauses,
//! and the theory clauses for function compatibility (EEf), endpoints (EP)
//! and density (DO).

use std::collections::HashMap;

use thiserror::Error;

use crate::clause::{normalize_set, OrderClause, OrderLiteral};
use crate::formula::{subformulas, Formula};
use crate::skolem::NameSupply;
use crate::term::{Origin, Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClausifyError {
    #[error("not a Hex conjunct: {0}")]
    NotHexShape(String),
    #[error("quantifier inside a matrix")]
    QuantifiedMatrix,
}

/// The connective a definitional atom stands for, over the atoms (as terms)
/// of its immediate subformulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefShape {
    And(Term, Term),
    Or(Term, Term),
    Implies(Term, Term),
    Delta(Term),
}

/// `definiendum ≐ shape`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefEquivalence {
    pub definiendum: Term,
    pub shape: DefShape,
}

/// One definition per distinct non-atomic subformula, children first, and
/// the term standing for `m` itself. Each definitional atom takes the
/// subformula's variables in order of first occurrence.
pub fn definitional_defs(m: &Formula, names: &mut NameSupply) -> Result<(Vec<DefEquivalence>, Term), ClausifyError> {
    if !m.is_quantifier_free() {
        return Err(ClausifyError::QuantifiedMatrix);
    }
    let mut named: HashMap<Formula, Term> = HashMap::new();
    let mut defs = Vec::new();
    for f in subformulas(m) {
        let vars: Vec<Term> = f.vars_in_order().into_iter().map(Term::Var).collect();
        let sym = Symbol::new(names.numbered("def"), vars.len(), Origin::Definitional);
        let head = Term::app(sym, vars);
        let child = |g: &Formula| atom_term(g, &named);
        let shape = match &f {
            Formula::And(l, r) => DefShape::And(child(l), child(r)),
            Formula::Or(l, r) => DefShape::Or(child(l), child(r)),
            Formula::Implies(l, r) => DefShape::Implies(child(l), child(r)),
            Formula::Delta(g) => DefShape::Delta(child(g)),
            _ => unreachable!("subformulas are non-atomic"),
        };
        named.insert(f, head.clone());
        defs.push(DefEquivalence {
            definiendum: head,
            shape,
        });
    }
    let root = atom_term(m, &named);
    Ok((defs, root))
}

fn atom_term(f: &Formula, named: &HashMap<Formula, Term>) -> Term {
    match f {
        Formula::Atom(a) => a.to_term(),
        Formula::Top => Term::top(),
        Formula::Bottom => Term::bottom(),
        _ => named.get(f).cloned().expect("children are defined first"),
    }
}

fn le(a: &Term, b: &Term) -> OrderLiteral {
    OrderLiteral::le(a.clone(), b.clone())
}

fn lt(a: &Term, b: &Term) -> OrderLiteral {
    OrderLiteral::lt(a.clone(), b.clone())
}

/// The clause table of one definition.
pub fn clausify_def(d: &DefEquivalence) -> Vec<OrderClause> {
    let c = &d.definiendum;
    let top = Term::top();
    let bot = Term::bottom();
    let cl = |lits: Vec<OrderLiteral>| OrderClause::new(lits);
    match &d.shape {
        DefShape::And(a, b) => vec![cl(vec![le(c, a)]), cl(vec![le(c, b)]), cl(vec![le(a, c), le(b, c)])],
        DefShape::Or(a, b) => vec![cl(vec![le(a, c)]), cl(vec![le(b, c)]), cl(vec![le(c, a), le(c, b)])],
        DefShape::Implies(a, b) => vec![
            cl(vec![le(a, b), le(c, b)]),
            cl(vec![le(&top, c), lt(b, a)]),
            cl(vec![le(&top, c), le(c, b)]),
            cl(vec![le(b, c)]),
        ],
        DefShape::Delta(a) => vec![cl(vec![le(c, &bot), le(&top, a)]), cl(vec![le(&top, c), lt(a, &top)])],
    }
}

fn cl_with_root(
    m: &Formula,
    names: &mut NameSupply,
    root_clause: impl Fn(&Term) -> OrderLiteral,
) -> Result<Vec<OrderClause>, ClausifyError> {
    let (defs, root) = definitional_defs(m, names)?;
    let mut out = vec![OrderClause::new(vec![root_clause(&root)])];
    for d in &defs {
        out.extend(clausify_def(d));
    }
    Ok(normalize_set(out))
}

/// Clauses that are DTOE-unsatisfiable iff `m` is valid.
pub fn cl_val(m: &Formula, names: &mut NameSupply) -> Result<Vec<OrderClause>, ClausifyError> {
    cl_with_root(m, names, |r| lt(r, &Term::top()))
}

/// Clauses that are DTOE-satisfiable iff `m` is 1-satisfiable.
pub fn cl_sat(m: &Formula, names: &mut NameSupply) -> Result<Vec<OrderClause>, ClausifyError> {
    cl_with_root(m, names, |r| le(&Term::top(), r))
}

/// `A ȳ (D(top -> p(ȳ)) | ~D(q(f(ȳ)) -> p(ȳ)))` becomes
/// `{top <= p(ȳ), p(ȳ) < q(f(ȳ))}`; both disjuncts are two-valued.
pub fn hex_to_clauses(h: &Formula) -> Result<OrderClause, ClausifyError> {
    let not_hex = || ClausifyError::NotHexShape(crate::io::render_formula(h));
    let mut body = h;
    while let Formula::Forall(_, b) = body {
        body = b;
    }
    let Formula::Or(l, r) = body else {
        return Err(not_hex());
    };
    let p = match &**l {
        Formula::Delta(g) => match &**g {
            Formula::Implies(t, p) if **t == Formula::Top => match &**p {
                Formula::Atom(a) => a.to_term(),
                _ => return Err(not_hex()),
            },
            _ => return Err(not_hex()),
        },
        _ => return Err(not_hex()),
    };
    let (q, p2) = match &**r {
        Formula::Implies(d, b) if **b == Formula::Bottom => match &**d {
            Formula::Delta(g) => match &**g {
                Formula::Implies(q, p2) => match (&**q, &**p2) {
                    (Formula::Atom(q), Formula::Atom(p2)) => (q.to_term(), p2.to_term()),
                    _ => return Err(not_hex()),
                },
                _ => return Err(not_hex()),
            },
            _ => return Err(not_hex()),
        },
        _ => return Err(not_hex()),
    };
    if p != p2 {
        return Err(not_hex());
    }
    Ok(OrderClause::new(vec![le(&Term::top(), &p), lt(&p, &q)]))
}

/// The density witness symbol.
pub fn density_symbol(names: &mut NameSupply) -> Symbol {
    Symbol::new(names.named("dens"), 2, Origin::Density)
}

/// EEf for every symbol of positive arity except `density`, then EP and DO.
pub fn theory_clauses(signature: &[Symbol], density: &Symbol) -> Vec<OrderClause> {
    let mut out = Vec::new();
    let mut seen: Vec<&Symbol> = Vec::new();
    for f in signature {
        if f.arity() == 0 || f == density || seen.contains(&f) {
            continue;
        }
        seen.push(f);
        out.push(eef_clause(f));
    }
    let x = Term::var("x");
    let y = Term::var("y");
    let top = Term::top();
    let bot = Term::bottom();
    out.push(OrderClause::new(vec![le(&bot, &y)]));
    out.push(OrderClause::new(vec![le(&y, &top)]));
    out.push(OrderClause::new(vec![lt(&bot, &top)]));
    let d = Term::app(density.clone(), vec![x.clone(), y.clone()]);
    out.push(OrderClause::new(vec![le(&y, &x), lt(&d, &y)]));
    out.push(OrderClause::new(vec![le(&y, &x), lt(&x, &d)]));
    out
}

/// `{x1 < y1, y1 < x1, ..., f(x1, ..) <= f(y1, ..)}`.
pub fn eef_clause(f: &Symbol) -> OrderClause {
    let xs: Vec<Term> = (1..=f.arity()).map(|i| Term::Var(Var::new(format!("u{i}")))).collect();
    let ys: Vec<Term> = (1..=f.arity()).map(|i| Term::Var(Var::new(format!("v{i}")))).collect();
    let mut lits = Vec::new();
    for (x, y) in xs.iter().zip(&ys) {
        lits.push(lt(x, y));
        lits.push(lt(y, x));
    }
    lits.push(le(&Term::app(f.clone(), xs), &Term::app(f.clone(), ys)));
    OrderClause::new(lits)
}

/// EP alone: `{bot <= y}`, `{y <= top}`, `{bot < top}`.
pub fn endpoint_clauses() -> Vec<OrderClause> {
    let y = Term::var("y");
    vec![
        OrderClause::new(vec![le(&Term::bottom(), &y)]),
        OrderClause::new(vec![le(&y, &Term::top())]),
        OrderClause::new(vec![lt(&Term::bottom(), &Term::top())]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_clause, parse_formula, render_clause};

    fn rendered(cs: &[OrderClause]) -> Vec<String> {
        let mut v: Vec<String> = cs.iter().map(render_clause).collect();
        v.sort();
        v
    }

    fn clauses(src: &[&str]) -> Vec<String> {
        let cs: Vec<OrderClause> = src.iter().map(|s| parse_clause(s).unwrap()).collect();
        rendered(&cs)
    }

    fn matrix(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn drinker_definitions() {
        let m = matrix("D p(f(x)) -> p(x)");
        let mut names = NameSupply::for_formulas([&m]);
        let (defs, root) = definitional_defs(&m, &mut names).unwrap();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].definiendum.to_string(), "def1(x)");
        assert!(matches!(&defs[0].shape, DefShape::Delta(a) if a.to_string() == "p(f(x))"));
        assert!(matches!(&defs[1].shape,
            DefShape::Implies(a, b) if a.to_string() == "def1(x)" && b.to_string() == "p(x)"));
        assert_eq!(root.to_string(), "def2(x)");

        assert_eq!(
            rendered(&clausify_def(&defs[1])),
            clauses(&[
                "{def1(x) <= p(x), def2(x) <= p(x)}",
                "{top <= def2(x), p(x) < def1(x)}",
                "{top <= def2(x), def2(x) <= p(x)}",
                "{p(x) <= def2(x)}",
            ])
        );
        assert_eq!(
            rendered(&clausify_def(&defs[0])),
            clauses(&["{def1(x) <= bot, top <= p(f(x))}", "{top <= def1(x), p(f(x)) < top}"])
        );
    }

    #[test]
    fn atoms_need_no_definition() {
        let m = matrix("p(c)");
        let (defs, root) = definitional_defs(&m, &mut NameSupply::new()).unwrap();
        assert!(defs.is_empty());
        assert_eq!(root.to_string(), "p(c)");
        let m = matrix("a & a");
        let (defs, _) = definitional_defs(&m, &mut NameSupply::new()).unwrap();
        assert_eq!(defs.len(), 1);
    }

    #[test]
    fn conjunction_table() {
        let a = Term::constant(Symbol::new("a", 0, Origin::Predicate));
        let b = Term::constant(Symbol::new("b", 0, Origin::Predicate));
        let c = Term::constant(Symbol::new("c", 0, Origin::Definitional));
        let d = DefEquivalence {
            definiendum: c,
            shape: DefShape::And(a, b),
        };
        assert_eq!(
            rendered(&clausify_def(&d)),
            clauses(&["{c <= a}", "{c <= b}", "{a <= c, b <= c}"])
        );
    }

    #[test]
    fn root_clauses() {
        let m = matrix("D p(f(x)) -> p(x)");
        let cs = cl_val(&m, &mut NameSupply::for_formulas([&m])).unwrap();
        assert_eq!(cs.len(), 7);
        assert!(rendered(&cs).contains(&"{def2(x1) < top}".to_string()));

        let a = matrix("a");
        assert_eq!(rendered(&cl_val(&a, &mut NameSupply::new()).unwrap()), ["{a < top}"]);
        assert_eq!(rendered(&cl_sat(&a, &mut NameSupply::new()).unwrap()), ["{top <= a}"]);
        assert_eq!(cl_val(&matrix("a -> a"), &mut NameSupply::new()).unwrap().len(), 5);
        let da = cl_sat(&matrix("D a"), &mut NameSupply::new()).unwrap();
        assert_eq!(
            rendered(&da),
            clauses(&["{top <= def1}", "{def1 <= bot, top <= a}", "{top <= def1, a < top}"])
        );
    }

    #[test]
    fn hex_clauses() {
        let mut names = NameSupply::new();
        let q = Symbol::new("q", 1, Origin::Guard);
        let p = Symbol::new("p", 1, Origin::Predicate);
        let r = Symbol::new("r", 2, Origin::Predicate);
        let (hs, _) = crate::skolem::hex(&q, &[q.clone(), p, r], &mut names);
        let got: Vec<String> = hs.iter().map(|h| render_clause(&hex_to_clauses(h).unwrap())).collect();
        assert_eq!(
            got,
            [
                "{q(x1) < q(hexw_q(x1)), top <= q(x1)}",
                "{p(x1) < q(hexw_p(x1)), top <= p(x1)}",
                "{r(x1, x2) < q(hexw_r(x1, x2)), top <= r(x1, x2)}",
            ]
        );
        assert!(matches!(
            hex_to_clauses(&matrix("a | b")),
            Err(ClausifyError::NotHexShape(_))
        ));
    }

    #[test]
    fn theory() {
        let d = Symbol::new("dens", 2, Origin::Density);
        let p = Symbol::new("p", 1, Origin::Predicate);
        let c = Symbol::new("c", 0, Origin::Constant);
        let g = Symbol::new("g", 2, Origin::Function);
        let th = theory_clauses(&[p, c, d.clone()], &d);
        assert_eq!(th.len(), 6);
        assert_eq!(render_clause(&th[0]), "{p(x1) <= p(x2), x1 < x2, x2 < x1}");
        let rest = rendered(&th[1..]);
        assert_eq!(
            rest,
            clauses(&[
                "{bot <= y}",
                "{y <= top}",
                "{bot < top}",
                "{y <= x, dens(x, y) < y}",
                "{y <= x, x < dens(x, y)}",
            ])
        );
        assert_eq!(theory_clauses(&[], &d).len(), 5);
        assert_eq!(
            render_clause(&theory_clauses(&[g], &d)[0]),
            "{g(x1, x3) <= g(x2, x4), x1 < x2, x2 < x1, x3 < x4, x4 < x3}"
        );
    }
}
