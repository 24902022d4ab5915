use std::collections::BTreeMap;
use std::fmt;

use crate::clause::OrderLiteral;
use crate::term::{Term, Var};

/// An idempotent substitution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.substitute(&|v: &Var| self.map.get(v).cloned())
    }

    pub fn apply_literal(&self, l: &OrderLiteral) -> OrderLiteral {
        OrderLiteral {
            left: self.apply(&l.left),
            right: self.apply(&l.right),
            strict: l.strict,
        }
    }

    /// Binds `v` to `t` (already applied to the current bindings), keeping
    /// the substitution idempotent. Fails on the occurs check.
    fn bind(&mut self, v: Var, t: Term) -> bool {
        if t.occurs(&v) {
            return false;
        }
        let single = |w: &Var| (w == &v).then(|| t.clone());
        for u in self.map.values_mut() {
            *u = u.substitute(&single);
        }
        self.map.insert(v, t);
        true
    }

    /// Extends the substitution so that `s` and `t` become equal.
    pub fn unify(&mut self, s: &Term, t: &Term) -> bool {
        let mut stack = vec![(self.apply(s), self.apply(t))];
        while let Some((a, b)) = stack.pop() {
            let (a, b) = (self.apply(&a), self.apply(&b));
            if a == b {
                continue;
            }
            match (a, b) {
                (Term::Var(v), t) | (t, Term::Var(v)) => {
                    if !self.bind(v, t) {
                        return false;
                    }
                }
                (Term::App(f, xs), Term::App(g, ys)) => {
                    if f != g {
                        return false;
                    }
                    stack.extend(xs.into_iter().zip(ys));
                }
            }
        }
        true
    }

    /// One-way matching: extends the substitution so that `pattern`
    /// becomes `target`, binding only variables of the pattern.
    pub fn match_term(&mut self, pattern: &Term, target: &Term) -> bool {
        match pattern {
            Term::Var(v) => match self.map.get(v) {
                Some(t) => t == target,
                None => {
                    self.map.insert(v.clone(), target.clone());
                    true
                }
            },
            Term::App(f, xs) => match target {
                Term::App(g, ys) if f == g => xs.iter().zip(ys).all(|(x, y)| self.match_term(x, y)),
                _ => false,
            },
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} <- {t}")?;
        }
        f.write_str("}")
    }
}

/// Simultaneous most general unifier of all `terms`.
pub fn mgu(terms: &[Term]) -> Option<Substitution> {
    let mut s = Substitution::new();
    let (first, rest) = terms.split_first()?;
    for t in rest {
        if !s.unify(first, t) {
            return None;
        }
    }
    Some(s)
}
