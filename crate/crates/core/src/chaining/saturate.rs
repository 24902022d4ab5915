use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use super::order::ReductionOrder;
use super::rules::{all_chainings, irreflexivity_resolution, is_tautology, is_theory_tautology, subsumes, Inference};
use super::trace::{ProofStep, ProofTrace, Rule};
use crate::clause::OrderClause;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationLimits {
    /// Bound on generated conclusions.
    pub max_clauses: usize,
    pub max_time: Duration,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits {
            max_clauses: 100_000,
            max_time: Duration::from_secs(10),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SaturationStats {
    /// Conclusions produced by the rules, redundant ones included.
    pub generated: usize,
    /// Clauses kept after redundancy checks, inputs included.
    pub kept: usize,
    /// Given-clause iterations.
    pub given: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaturationResult {
    /// The empty clause was derived; the trace holds only its ancestors.
    Unsat {
        trace: ProofTrace,
        stats: SaturationStats,
    },
    /// No rule yields anything new; the clauses are the final active set.
    Saturated {
        clauses: Vec<OrderClause>,
        stats: SaturationStats,
    },
    ResourceOut {
        stats: SaturationStats,
    },
}

impl SaturationResult {
    pub fn stats(&self) -> SaturationStats {
        match self {
            SaturationResult::Unsat { stats, .. }
            | SaturationResult::Saturated { stats, .. }
            | SaturationResult::ResourceOut { stats } => *stats,
        }
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SaturationResult::Unsat { .. })
    }
}

/// Every fifth given clause is the oldest waiting one rather than the lightest.
const AGE_EVERY: usize = 5;

struct State<'a> {
    order: &'a ReductionOrder,
    steps: Vec<ProofStep>,
    seen: HashSet<OrderClause>,
    by_weight: BinaryHeap<Reverse<(usize, usize)>>,
    by_age: VecDeque<usize>,
    done: HashSet<usize>,
    active: Vec<usize>,
    stats: SaturationStats,
}

impl State<'_> {
    fn clause(&self, id: usize) -> &OrderClause {
        &self.steps[id - 1].clause
    }

    fn redundant(&self, c: &OrderClause) -> bool {
        is_tautology(c)
            || self.seen.contains(c)
            || self.active.iter().any(|&a| subsumes(self.clause(a), c))
            || is_theory_tautology(c)
    }

    /// Records `c`; returns its id.
    fn keep(&mut self, clause: OrderClause, rule: Rule) -> usize {
        let id = self.steps.len() + 1;
        self.seen.insert(clause.clone());
        self.by_weight.push(Reverse((clause.weight(), id)));
        self.by_age.push_back(id);
        self.steps.push(ProofStep { id, clause, rule });
        self.stats.kept += 1;
        id
    }

    fn next_given(&mut self) -> Option<usize> {
        let by_age = self.stats.given % AGE_EVERY == AGE_EVERY - 1;
        loop {
            let id = if by_age {
                self.by_age.pop_front()
            } else {
                self.by_weight.pop().map(|Reverse((_, id))| id)
            }
            .or_else(|| self.by_age.pop_front())?;
            if self.done.insert(id) {
                return Some(id);
            }
        }
    }

    fn proof(&self, last: usize) -> ProofTrace {
        let mut need = BTreeSet::new();
        let mut todo = vec![last];
        while let Some(id) = todo.pop() {
            if need.insert(id) {
                todo.extend(self.steps[id - 1].rule.parents());
            }
        }
        ProofTrace {
            order: self.order.clone(),
            steps: need.into_iter().map(|id| self.steps[id - 1].clone()).collect(),
        }
    }
}

/// Given-clause saturation under the chaining and irreflexivity rules, with
/// tautology deletion (syntactic and modulo the endpoint axioms) and forward
/// subsumption.
pub fn saturate(input: &[OrderClause], order: &ReductionOrder, limits: SaturationLimits) -> SaturationResult {
    let start = Instant::now();
    let mut st = State {
        order,
        steps: Vec::new(),
        seen: HashSet::new(),
        by_weight: BinaryHeap::new(),
        by_age: VecDeque::new(),
        done: HashSet::new(),
        active: Vec::new(),
        stats: SaturationStats::default(),
    };
    let finish = |st: &State, start: Instant| SaturationStats {
        elapsed: start.elapsed(),
        ..st.stats
    };
    for c in input {
        if is_tautology(c) || st.seen.contains(c) {
            continue;
        }
        let id = st.keep(c.clone(), Rule::Input);
        if c.is_empty() {
            let stats = finish(&st, start);
            return SaturationResult::Unsat {
                trace: st.proof(id),
                stats,
            };
        }
    }
    while let Some(g) = st.next_given() {
        if start.elapsed() > limits.max_time {
            break;
        }
        st.stats.given += 1;
        let given = st.clause(g).clone();
        if st.active.iter().any(|&a| subsumes(st.clause(a), &given)) {
            continue;
        }
        st.active.push(g);

        let mut fresh: Vec<(Inference, Rule)> = Vec::new();
        for k in 0..given.len() {
            if let Some(inf) = irreflexivity_resolution(&given, k, order) {
                let rule = Rule::Irreflexivity {
                    parent: g,
                    literal: k,
                    unifier: inf.unifier.clone(),
                };
                fresh.push((inf, rule));
            }
        }
        let partners = st.active.clone();
        for a in partners {
            let other = st.clause(a).clone();
            let mut pairs = vec![(g, &given, a, &other)];
            if a != g {
                pairs.push((a, &other, g, &given));
            }
            for (l, lc, r, rc) in pairs {
                for (ls, rs, inf) in all_chainings(lc, rc, order) {
                    let rule = Rule::Chaining {
                        left: l,
                        left_literals: ls,
                        right: r,
                        right_literals: rs,
                        unifier: inf.unifier.clone(),
                    };
                    fresh.push((inf, rule));
                }
            }
            if start.elapsed() > limits.max_time {
                break;
            }
        }
        for (inf, rule) in fresh {
            st.stats.generated += 1;
            if st.redundant(&inf.clause) {
                continue;
            }
            let empty = inf.clause.is_empty();
            let id = st.keep(inf.clause, rule);
            if empty {
                let stats = finish(&st, start);
                return SaturationResult::Unsat {
                    trace: st.proof(id),
                    stats,
                };
            }
        }
        if st.stats.generated > limits.max_clauses || start.elapsed() > limits.max_time {
            return SaturationResult::ResourceOut {
                stats: finish(&st, start),
            };
        }
    }
    let stats = finish(&st, start);
    if start.elapsed() > limits.max_time {
        return SaturationResult::ResourceOut { stats };
    }
    let clauses = st.active.iter().map(|&a| st.clause(a).clone()).collect();
    SaturationResult::Saturated { clauses, stats }
}
