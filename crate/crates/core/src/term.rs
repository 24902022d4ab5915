//! First-order terms over a signature in which predicate symbols double as
//! function symbols.
//!
//! Once a matrix is translated into order clauses an atom `p(t1, ..., tn)` is
//! no longer a formula but a term whose head happens to be a predicate symbol.
//! The truth constants become the two endpoint constants `top` and `bot`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Where a symbol came from. Used for precedence and for de-Skolemization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Predicate,
    Function,
    Constant,
    /// Validity Skolem symbol replacing the universal variable at the given
    /// (zero-based) prefix position.
    Skolem {
        position: usize,
    },
    /// Satisfiability Skolem symbol (q-guarded or dual).
    SatSkolem,
    /// The fresh monadic predicate `q` of SAT-Skolemization.
    Guard,
    HexWitness,
    Definitional,
    Density,
    Top,
    Bottom,
}

/// A function or predicate symbol. Identity is `(name, arity)`; the origin tag
/// is metadata and does not take part in comparisons.
#[derive(Clone, Debug)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
    origin: Origin,
}

pub const TOP_NAME: &str = "top";
pub const BOTTOM_NAME: &str = "bot";

impl Symbol {
    pub fn new(name: impl Into<Arc<str>>, arity: usize, origin: Origin) -> Self {
        Symbol {
            name: name.into(),
            arity,
            origin,
        }
    }

    pub fn top() -> Self {
        Symbol::new(TOP_NAME, 0, Origin::Top)
    }

    pub fn bottom() -> Self {
        Symbol::new(BOTTOM_NAME, 0, Origin::Bottom)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn is_top(&self) -> bool {
        self.arity == 0 && &*self.name == TOP_NAME
    }

    pub fn is_bottom(&self) -> bool {
        self.arity == 0 && &*self.name == BOTTOM_NAME
    }

    pub fn is_endpoint(&self) -> bool {
        self.is_top() || self.is_bottom()
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.name == other.name
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.arity.hash(state);
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name).then(self.arity.cmp(&other.arity))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Arc<str>>) -> Self {
        Term::Var(Var::new(name))
    }

    /// Builds an application.
    ///
    /// Panics if the number of arguments differs from the symbol's arity.
    pub fn app(head: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(
            head.arity(),
            args.len(),
            "symbol `{}` applied to the wrong number of arguments",
            head.name()
        );
        Term::App(head, args)
    }

    pub fn constant(head: Symbol) -> Self {
        Term::app(head, Vec::new())
    }

    pub fn top() -> Self {
        Term::App(Symbol::top(), Vec::new())
    }

    pub fn bottom() -> Self {
        Term::App(Symbol::bottom(), Vec::new())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Term::App(s, _) if s.is_top())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Term::App(s, _) if s.is_bottom())
    }

    pub fn is_endpoint(&self) -> bool {
        self.is_top() || self.is_bottom()
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(s, _) => Some(s),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences (variables count as one).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Nesting depth: constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// True if `sub` occurs in `self` (including `self == sub`).
    pub fn contains(&self, sub: &Term) -> bool {
        self == sub || self.args().iter().any(|a| a.contains(sub))
    }

    /// Variables in order of first occurrence, without repetition.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Symbols in order of first occurrence, without repetition.
    pub(crate) fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        if let Term::App(s, args) = self {
            if !out.contains(s) {
                out.push(s.clone());
            }
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// Every subterm, parents before children.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.args().iter().rev());
        }
        out
    }

    /// Replaces variables according to `f`; unmapped variables stay.
    pub fn substitute<F>(&self, f: &F) -> Term
    where
        F: Fn(&Var) -> Option<Term>,
    {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    pub fn replace_var(&self, v: &Var, by: &Term) -> Term {
        self.substitute(&|w: &Var| (w == v).then(|| by.clone()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                write!(f, "{s}")?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}
