#![allow(dead_code)]

use std::collections::BTreeMap;

use gdelta::{Formula, OrderClause, Origin, Symbol, Term};
use rand::Rng;

pub fn atom(name: &str) -> Formula {
    Formula::atom(Symbol::new(name, 0, Origin::Predicate), vec![])
}

/// A random quantifier-free formula over the nullary predicates `names`.
pub fn random_formula(rng: &mut impl Rng, names: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => atom(names[rng.gen_range(0..names.len())]),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, names, depth - 1);
    match rng.gen_range(0..5) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::delta(sub(rng)),
        _ => Formula::not(sub(rng)),
    }
}

/// Gödel semantics on integer levels `0..=top`.
pub fn value(f: &Formula, v: &BTreeMap<String, u32>, top: u32) -> u32 {
    match f {
        Formula::Top => top,
        Formula::Bottom => 0,
        Formula::Atom(a) => v[a.pred.name()],
        Formula::And(l, r) => value(l, v, top).min(value(r, v, top)),
        Formula::Or(l, r) => value(l, v, top).max(value(r, v, top)),
        Formula::Implies(l, r) => {
            let (a, b) = (value(l, v, top), value(r, v, top));
            if a <= b {
                top
            } else {
                b
            }
        }
        Formula::Delta(g) => {
            if value(g, v, top) == top {
                top
            } else {
                0
            }
        }
        _ => panic!("quantifier in a ground formula"),
    }
}

fn levels(names: &[String]) -> Vec<BTreeMap<String, u32>> {
    let top = names.len() as u32 + 1;
    let mut out = vec![BTreeMap::new()];
    for n in names {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=top).map(move |l| {
                    let mut m2 = m.clone();
                    m2.insert(n.clone(), l);
                    m2
                })
            })
            .collect();
    }
    out
}

fn names_of(f: &Formula) -> Vec<String> {
    let mut v: Vec<String> = f.predicates().iter().map(|p| p.name().to_string()).collect();
    v.sort();
    v.dedup();
    v
}

pub fn brute_valid(f: &Formula) -> bool {
    let names = names_of(f);
    let top = names.len() as u32 + 1;
    levels(&names).iter().all(|v| value(f, v, top) == top)
}

pub fn brute_sat(f: &Formula) -> bool {
    let names = names_of(f);
    let top = names.len() as u32 + 1;
    levels(&names).iter().any(|v| value(f, v, top) == top)
}

/// Satisfiability of ground order clauses by trying every level assignment,
/// with `bot` at 0 and `top` at `n + 1`.
pub fn brute_clause_sat(cs: &[OrderClause]) -> bool {
    let mut terms: Vec<Term> = Vec::new();
    for c in cs {
        for l in c.literals() {
            for t in [&l.left, &l.right] {
                if !t.is_endpoint() && !terms.contains(t) {
                    terms.push(t.clone());
                }
            }
        }
    }
    let base = terms.len() + 2;
    let top = base as u32 - 1;
    (0..base.pow(terms.len() as u32)).any(|code| {
        let mut c = code;
        let mut lv = BTreeMap::new();
        for t in &terms {
            lv.insert(t.clone(), (c % base) as u32);
            c /= base;
        }
        let level = |t: &Term| {
            if t.is_bottom() {
                0
            } else if t.is_top() {
                top
            } else {
                lv[t]
            }
        };
        cs.iter().all(|cl| {
            cl.literals().iter().any(|l| {
                let (a, b) = (level(&l.left), level(&l.right));
                if l.strict {
                    a < b
                } else {
                    a <= b
                }
            })
        })
    })
}
