use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::term::{Symbol, Term};

type Key = (u8, usize, usize, String);

/// A lexicographic path order. The precedence puts `bot` below `top`
/// below all constants below all function symbols; within a group symbols
/// compare by arity, then by introduction index, then by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionOrder {
    index: HashMap<Symbol, usize>,
    listed: Vec<Symbol>,
}

impl ReductionOrder {
    /// `symbols` in introduction order; repeated symbols keep their first index.
    pub fn new<'a>(symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut o = ReductionOrder::default();
        for s in symbols {
            o.introduce(s.clone());
        }
        o
    }

    pub fn introduce(&mut self, s: Symbol) {
        if s.is_endpoint() || self.index.contains_key(&s) {
            return;
        }
        self.index.insert(s.clone(), self.listed.len());
        self.listed.push(s);
    }

    fn key(&self, s: &Symbol) -> Key {
        let group = if s.is_bottom() {
            0
        } else if s.is_top() {
            1
        } else if s.arity() == 0 {
            2
        } else {
            3
        };
        let idx = self.index.get(s).copied().unwrap_or(usize::MAX);
        (group, s.arity(), idx, s.name().to_string())
    }

    pub fn compare_symbols(&self, a: &Symbol, b: &Symbol) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        self.key(a).cmp(&self.key(b))
    }

    /// All known symbols from least to greatest, endpoints included.
    pub fn precedence(&self) -> Vec<Symbol> {
        let mut v = vec![Symbol::bottom(), Symbol::top()];
        v.extend(self.listed.iter().cloned());
        v.sort_by(|a, b| self.compare_symbols(a, b));
        v
    }

    pub fn greater(&self, s: &Term, t: &Term) -> bool {
        lpo_greater(self, s, t)
    }

    /// `s ⋡ t`: neither greater nor equal.
    pub fn not_greater_or_equal(&self, s: &Term, t: &Term) -> bool {
        s != t && !self.greater(s, t)
    }
}

impl fmt::Display for ReductionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.precedence().iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            write!(f, "{}/{}", s.name(), s.arity())?;
        }
        Ok(())
    }
}

pub fn lpo_greater(o: &ReductionOrder, s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Var(_), _) => false,
        (Term::App(..), Term::Var(v)) => s.occurs(v),
        (Term::App(f, ss), Term::App(g, ts)) => {
            if ss.iter().any(|si| si == t || lpo_greater(o, si, t)) {
                return true;
            }
            match o.compare_symbols(f, g) {
                Ordering::Greater => ts.iter().all(|tj| lpo_greater(o, s, tj)),
                Ordering::Equal => {
                    let Some(i) = ss.iter().zip(ts).position(|(a, b)| a != b) else {
                        return false;
                    };
                    lpo_greater(o, &ss[i], &ts[i]) && ts[i + 1..].iter().all(|tj| lpo_greater(o, s, tj))
                }
                Ordering::Less => false,
            }
        }
    }
}
