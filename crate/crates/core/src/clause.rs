//! Order clauses: finite disjunctions of `s < t` and `s <= t`.

use std::collections::HashMap;
use std::fmt;

use crate::term::{Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderLiteral {
    pub left: Term,
    pub right: Term,
    pub strict: bool,
}

impl OrderLiteral {
    pub fn lt(left: Term, right: Term) -> Self {
        OrderLiteral {
            left,
            right,
            strict: true,
        }
    }

    pub fn le(left: Term, right: Term) -> Self {
        OrderLiteral {
            left,
            right,
            strict: false,
        }
    }

    pub fn substitute<F: Fn(&Var) -> Option<Term>>(&self, f: &F) -> Self {
        OrderLiteral {
            left: self.left.substitute(f),
            right: self.right.substitute(f),
            strict: self.strict,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.left.is_ground() && self.right.is_ground()
    }

    fn shape_key(&self) -> String {
        let blank = |t: &Term| t.substitute(&|_| Some(Term::var("_"))).to_string();
        format!("{} {} {}", blank(&self.left), self.op(), blank(&self.right))
    }

    pub fn op(&self) -> &'static str {
        if self.strict {
            "<"
        } else {
            "<="
        }
    }
}

impl fmt::Display for OrderLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.op(), self.right)
    }
}

/// A set of order literals.
///
/// Clauses built with [`OrderClause::new`] are normalized: variables are
/// renamed `x1, x2, ...` and literals are sorted by rendered text with
/// duplicates removed, so variants usually compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderClause {
    literals: Vec<OrderLiteral>,
}

impl OrderClause {
    pub fn new(literals: Vec<OrderLiteral>) -> Self {
        let mut keyed: Vec<(String, String, OrderLiteral)> = literals
            .into_iter()
            .map(|l| (l.shape_key(), l.to_string(), l))
            .collect();
        keyed.sort();
        let mut names: HashMap<Var, Term> = HashMap::new();
        for (_, _, l) in &keyed {
            for v in l.left.vars().into_iter().chain(l.right.vars()) {
                let next = names.len() + 1;
                names.entry(v).or_insert_with(|| Term::var(format!("x{next}")));
            }
        }
        let mut lits: Vec<(String, OrderLiteral)> = keyed
            .into_iter()
            .map(|(_, _, l)| {
                let l = l.substitute(&|v: &Var| names.get(v).cloned());
                (l.to_string(), l)
            })
            .collect();
        lits.sort();
        lits.dedup();
        OrderClause {
            literals: lits.into_iter().map(|(_, l)| l).collect(),
        }
    }

    /// Keeps the literals as given, for text that is already normalized.
    pub(crate) fn verbatim(literals: Vec<OrderLiteral>) -> Self {
        OrderClause { literals }
    }

    pub fn empty() -> Self {
        OrderClause { literals: Vec::new() }
    }

    pub fn literals(&self) -> &[OrderLiteral] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(OrderLiteral::is_ground)
    }

    /// Symbol occurrences, the clause weight used by the saturation loop.
    pub fn weight(&self) -> usize {
        self.literals.iter().map(|l| l.left.size() + l.right.size()).sum()
    }

    /// The terms that occur as a side of some literal.
    pub fn basic_terms(&self) -> Vec<&Term> {
        let mut out: Vec<&Term> = Vec::new();
        for l in &self.literals {
            for t in [&l.left, &l.right] {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.left.collect_vars(&mut out);
            l.right.collect_vars(&mut out);
        }
        out
    }

    pub(crate) fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        for l in &self.literals {
            l.left.collect_symbols(out);
            l.right.collect_symbols(out);
        }
    }
}

impl fmt::Display for OrderClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// Sorts a clause list by rendered text and drops duplicates.
pub fn normalize_set(mut cs: Vec<OrderClause>) -> Vec<OrderClause> {
    cs.sort_by_cached_key(|c| c.to_string());
    cs.dedup();
    cs
}

/// Every symbol of a clause list, endpoints included, in first-occurrence order.
pub fn clause_symbols(cs: &[OrderClause]) -> Vec<Symbol> {
    let mut out = Vec::new();
    for c in cs {
        c.collect_symbols(&mut out);
    }
    out
}
