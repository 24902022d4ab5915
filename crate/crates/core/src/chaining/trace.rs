use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::order::ReductionOrder;
use super::rules::{chaining, irreflexivity_resolution};
use super::unify::Substitution;
use crate::clause::OrderClause;
use crate::io::parse_clause_verbatim;
use crate::term::{Origin, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Input,
    Irreflexivity {
        parent: usize,
        literal: usize,
        unifier: Substitution,
    },
    Chaining {
        left: usize,
        left_literals: Vec<usize>,
        right: usize,
        right_literals: Vec<usize>,
        unifier: Substitution,
    },
}

impl Rule {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Rule::Input => Vec::new(),
            Rule::Irreflexivity { parent, .. } => vec![*parent],
            Rule::Chaining { left, right, .. } => vec![*left, *right],
        }
    }

    pub fn unifier(&self) -> Option<&Substitution> {
        match self {
            Rule::Input => None,
            Rule::Irreflexivity { unifier, .. } | Rule::Chaining { unifier, .. } => Some(unifier),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub id: usize,
    pub clause: OrderClause,
    pub rule: Rule,
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [", self.id, self.clause)?;
        match &self.rule {
            Rule::Input => f.write_str("input")?,
            Rule::Irreflexivity {
                parent,
                literal,
                unifier,
            } => write!(f, "irr {parent}:{literal} {unifier}")?,
            Rule::Chaining {
                left,
                left_literals,
                right,
                right_literals,
                unifier,
            } => write!(
                f,
                "chain {left}:{} {right}:{} {unifier}",
                join(left_literals),
                join(right_literals)
            )?,
        }
        f.write_str("]")
    }
}

/// A derivation in id order. Every parent id refers to an earlier step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub order: ReductionOrder,
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    pub fn inputs(&self) -> impl Iterator<Item = &OrderClause> {
        self.steps.iter().filter(|s| s.rule == Rule::Input).map(|s| &s.clause)
    }

    pub fn is_refutation(&self) -> bool {
        self.steps.iter().any(|s| s.clause.is_empty())
    }

    /// Number of derived (non-input) steps.
    pub fn derived(&self) -> usize {
        self.steps.iter().filter(|s| s.rule != Rule::Input).count()
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# order: {}", self.order)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("step {step}: unknown parent {parent}")]
    UnknownParent { step: usize, parent: usize },
    #[error("step {step}: duplicate id")]
    DuplicateId { step: usize },
    #[error("step {step}: the rule does not apply")]
    RuleFailed { step: usize },
    #[error("step {step}: expected {expected}, derived {found}")]
    Mismatch {
        step: usize,
        expected: String,
        found: String,
    },
    #[error("the trace does not derive the empty clause")]
    NotRefutation,
}

fn bad(line: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_symbol(line: usize, s: &str) -> Result<Symbol, ReplayError> {
    let (name, arity) = s
        .rsplit_once('/')
        .ok_or_else(|| bad(line, format!("bad symbol `{s}`")))?;
    let arity: usize = arity.parse().map_err(|_| bad(line, format!("bad arity in `{s}`")))?;
    let origin = if arity == 0 { Origin::Constant } else { Origin::Function };
    Ok(Symbol::new(name, arity, origin))
}

fn parse_ref(line: usize, s: &str) -> Result<(usize, Vec<usize>), ReplayError> {
    let (id, lits) = s
        .split_once(':')
        .ok_or_else(|| bad(line, format!("bad premise `{s}`")))?;
    let id = id.parse().map_err(|_| bad(line, format!("bad id `{id}`")))?;
    let lits = lits
        .split(',')
        .map(|k| k.parse().map_err(|_| bad(line, format!("bad literal index `{k}`"))))
        .collect::<Result<Vec<usize>, _>>()?;
    Ok((id, lits))
}

/// Reads the text written by `ProofTrace`'s `Display`. Unifiers are not
/// parsed back; [`replay`] recomputes and compares them.
pub fn parse_trace(text: &str) -> Result<ProofTrace, ReplayError> {
    let mut order = None;
    let mut symbols = Vec::new();
    let mut raw = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let n = n + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(prec) = rest.trim().strip_prefix("order:") {
                symbols = prec
                    .split(" < ")
                    .map(|s| parse_symbol(n, s.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                order = Some(ReductionOrder::new(symbols.iter()));
            }
            continue;
        }
        raw.push((n, line));
    }
    let order = order.ok_or_else(|| bad(1, "missing `# order:` header"))?;
    let mut steps = Vec::new();
    for (n, line) in raw {
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| bad(n, "expected `id: clause [rule]`"))?;
        let id: usize = id.trim().parse().map_err(|_| bad(n, format!("bad id `{id}`")))?;
        let open = rest.rfind('[').ok_or_else(|| bad(n, "missing rule"))?;
        let body = rest[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| bad(n, "unterminated rule"))?;
        let clause = parse_clause_verbatim(rest[..open].trim(), &symbols).map_err(|e| bad(n, e.to_string()))?;
        let words: Vec<&str> = body.split_whitespace().collect();
        let rule = match words.first().copied() {
            Some("input") => Rule::Input,
            Some("irr") if words.len() >= 2 => {
                let (parent, lits) = parse_ref(n, words[1])?;
                if lits.len() != 1 {
                    return Err(bad(n, "irreflexivity takes one literal"));
                }
                Rule::Irreflexivity {
                    parent,
                    literal: lits[0],
                    unifier: Substitution::new(),
                }
            }
            Some("chain") if words.len() >= 3 => {
                let (left, left_literals) = parse_ref(n, words[1])?;
                let (right, right_literals) = parse_ref(n, words[2])?;
                Rule::Chaining {
                    left,
                    left_literals,
                    right,
                    right_literals,
                    unifier: Substitution::new(),
                }
            }
            _ => return Err(bad(n, format!("unknown rule `{body}`"))),
        };
        steps.push(ProofStep { id, clause, rule });
    }
    Ok(ProofTrace { order, steps })
}

/// Re-runs every derived step and checks that it yields the recorded
/// clause, and that the trace ends in the empty clause. Recorded unifiers
/// are checked only when present. Returns the re-executed trace, whose
/// rendering matches the original when both were written by this crate.
pub fn replay(trace: &ProofTrace) -> Result<ProofTrace, ReplayError> {
    let mut known: HashMap<usize, &OrderClause> = HashMap::new();
    let mut out = Vec::with_capacity(trace.steps.len());
    for s in &trace.steps {
        let parent = |p: usize| {
            known
                .get(&p)
                .copied()
                .ok_or(ReplayError::UnknownParent { step: s.id, parent: p })
        };
        let derived = match &s.rule {
            Rule::Input => None,
            Rule::Irreflexivity { parent: p, literal, .. } => Some(
                irreflexivity_resolution(parent(*p)?, *literal, &trace.order)
                    .ok_or(ReplayError::RuleFailed { step: s.id })?,
            ),
            Rule::Chaining {
                left,
                left_literals,
                right,
                right_literals,
                ..
            } => Some(
                chaining(
                    parent(*left)?,
                    left_literals,
                    parent(*right)?,
                    right_literals,
                    &trace.order,
                )
                .ok_or(ReplayError::RuleFailed { step: s.id })?,
            ),
        };
        let mut rule = s.rule.clone();
        if let Some(inf) = derived {
            if inf.clause != s.clause {
                return Err(ReplayError::Mismatch {
                    step: s.id,
                    expected: s.clause.to_string(),
                    found: inf.clause.to_string(),
                });
            }
            let recorded = s.rule.unifier().filter(|u| !u.is_empty());
            if let Some(u) = recorded {
                if *u != inf.unifier {
                    return Err(ReplayError::Mismatch {
                        step: s.id,
                        expected: u.to_string(),
                        found: inf.unifier.to_string(),
                    });
                }
            }
            match &mut rule {
                Rule::Irreflexivity { unifier, .. } | Rule::Chaining { unifier, .. } => *unifier = inf.unifier,
                Rule::Input => {}
            }
        }
        if known.insert(s.id, &s.clause).is_some() {
            return Err(ReplayError::DuplicateId { step: s.id });
        }
        out.push(ProofStep {
            id: s.id,
            clause: s.clause.clone(),
            rule,
        });
    }
    if trace.is_refutation() {
        Ok(ProofTrace {
            order: trace.order.clone(),
            steps: out,
        })
    } else {
        Err(ReplayError::NotRefutation)
    }
}

/// Splits a file holding several traces, each starting at its own
/// `# order:` header, and parses each one.
pub fn parse_traces(text: &str) -> Result<Vec<ProofTrace>, ReplayError> {
    let mut sections: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim_start().starts_with("# order:") || sections.is_empty() {
            sections.push(String::new());
        }
        let cur = sections.last_mut().expect("pushed");
        cur.push_str(line);
        cur.push('\n');
    }
    sections
        .iter()
        .filter(|s| {
            s.lines()
                .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        })
        .map(|s| parse_trace(s))
        .collect()
}
