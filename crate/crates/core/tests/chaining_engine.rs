mod common;

use common::brute_clause_sat;
use gdelta::chaining::{
    chaining, irreflexivity_resolution, lpo_greater, mgu, parse_trace, replay, saturate, ReplayError, SaturationLimits,
    SaturationResult, Substitution,
};
use gdelta::clausify::{endpoint_clauses, theory_clauses};
use gdelta::io::parse_clauses;
use gdelta::{OrderClause, OrderLiteral, Origin, ReductionOrder, Symbol, Term, Var};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn sym(name: &str, arity: usize) -> Symbol {
    let origin = if arity == 0 { Origin::Constant } else { Origin::Function };
    Symbol::new(name, arity, origin)
}

fn signature() -> Vec<Symbol> {
    vec![sym("a", 0), sym("b", 0), sym("f", 1), sym("g", 2)]
}

fn order() -> ReductionOrder {
    ReductionOrder::new(signature().iter())
}

fn term_strategy(vars: bool) -> impl Strategy<Value = Term> {
    let mut leaves = vec![
        Just(Term::constant(sym("a", 0))).boxed(),
        Just(Term::constant(sym("b", 0))).boxed(),
        Just(Term::top()).boxed(),
        Just(Term::bottom()).boxed(),
    ];
    if vars {
        leaves.push(Just(Term::var("x")).boxed());
        leaves.push(Just(Term::var("y")).boxed());
    }
    proptest::strategy::Union::new(leaves).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app(sym("f", 1), vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::app(sym("g", 2), vec![s, t])),
        ]
    })
}

/// Ground terms over the signature up to `depth`.
fn ground_terms(depth: usize) -> Vec<Term> {
    let mut out = vec![
        Term::constant(sym("a", 0)),
        Term::constant(sym("b", 0)),
        Term::top(),
        Term::bottom(),
    ];
    for _ in 0..depth {
        let prev = out.clone();
        for s in &prev {
            out.push(Term::app(sym("f", 1), vec![s.clone()]));
            for t in &prev {
                out.push(Term::app(sym("g", 2), vec![s.clone(), t.clone()]));
            }
        }
        out.sort();
        out.dedup();
    }
    out
}

fn ground_subst(x: &Term, y: &Term) -> impl Fn(&Var) -> Option<Term> {
    let (x, y) = (x.clone(), y.clone());
    move |v: &Var| match v.name() {
        "x" => Some(x.clone()),
        "y" => Some(y.clone()),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lpo_is_irreflexive(t in term_strategy(true)) {
        prop_assert!(!lpo_greater(&order(), &t, &t));
    }

    #[test]
    fn lpo_is_transitive(s in term_strategy(true), t in term_strategy(true), u in term_strategy(true)) {
        let o = order();
        if lpo_greater(&o, &s, &t) && lpo_greater(&o, &t, &u) {
            prop_assert!(lpo_greater(&o, &s, &u));
        }
    }

    #[test]
    fn lpo_is_total_on_ground_terms(s in term_strategy(false), t in term_strategy(false)) {
        let o = order();
        if s != t {
            prop_assert!(lpo_greater(&o, &s, &t) != lpo_greater(&o, &t, &s));
        }
    }

    #[test]
    fn lpo_has_the_subterm_property(t in term_strategy(true)) {
        let o = order();
        for s in t.subterms() {
            if s != &t {
                prop_assert!(lpo_greater(&o, &t, s), "{} vs {}", t, s);
            }
        }
    }

    #[test]
    fn lpo_is_stable_under_substitution(
        s in term_strategy(true),
        t in term_strategy(true),
        x in term_strategy(false),
        y in term_strategy(false),
    ) {
        let o = order();
        if lpo_greater(&o, &s, &t) {
            let f = ground_subst(&x, &y);
            prop_assert!(lpo_greater(&o, &s.substitute(&f), &t.substitute(&f)));
        }
    }

    #[test]
    fn mgu_unifies(s in term_strategy(true), t in term_strategy(true)) {
        if let Some(sigma) = mgu(&[s.clone(), t.clone()]) {
            prop_assert_eq!(sigma.apply(&s), sigma.apply(&t));
        }
    }

    #[test]
    fn ground_unifiers_factor_through_the_mgu(s in term_strategy(true), t in term_strategy(true)) {
        let sigma = mgu(&[s.clone(), t.clone()]);
        let pair = |a: &Term, b: &Term| Term::app(sym("pair", 2), vec![a.clone(), b.clone()]);
        let xy = pair(&Term::var("x"), &Term::var("y"));
        for gx in ground_terms(1) {
            for gy in ground_terms(1) {
                let theta = ground_subst(&gx, &gy);
                if s.substitute(&theta) != t.substitute(&theta) {
                    continue;
                }
                let sigma = sigma.as_ref().expect("a unifier exists, so the mgu must");
                let mut tau = Substitution::new();
                prop_assert!(tau.match_term(&sigma.apply(&xy), &xy.substitute(&theta)));
            }
        }
    }
}

/// `¬C` as unit clauses.
fn negate(c: &OrderClause) -> Vec<OrderClause> {
    c.literals()
        .iter()
        .map(|l| {
            OrderClause::new(vec![OrderLiteral {
                left: l.right.clone(),
                right: l.left.clone(),
                strict: !l.strict,
            }])
        })
        .collect()
}

fn entails(premises: &[&OrderClause], conclusion: &OrderClause) -> bool {
    let mut cs: Vec<OrderClause> = premises.iter().map(|c| (*c).clone()).collect();
    cs.extend(negate(conclusion));
    !brute_clause_sat(&cs)
}

fn small_terms() -> Vec<Term> {
    vec![
        Term::constant(sym("a", 0)),
        Term::constant(sym("b", 0)),
        Term::app(sym("f", 1), vec![Term::constant(sym("a", 0))]),
        Term::top(),
        Term::bottom(),
    ]
}

fn random_clause(rng: &mut impl Rng, terms: &[Term], max_lits: usize) -> OrderClause {
    let n = rng.gen_range(1..=max_lits);
    OrderClause::new(
        (0..n)
            .map(|_| OrderLiteral {
                left: terms[rng.gen_range(0..terms.len())].clone(),
                right: terms[rng.gen_range(0..terms.len())].clone(),
                strict: rng.gen(),
            })
            .collect(),
    )
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

#[test]
fn ground_chaining_is_sound() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let o = order();
    let terms = small_terms();
    let mut fired = 0;
    for _ in 0..3000 {
        let c = random_clause(&mut rng, &terms, 3);
        let d = random_clause(&mut rng, &terms, 3);
        for cs in subsets(c.len()) {
            for ds in subsets(d.len()) {
                if let Some(inf) = chaining(&c, &cs, &d, &ds, &o) {
                    fired += 1;
                    assert!(
                        entails(&[&c, &d], &inf.clause),
                        "{c} {cs:?} / {d} {ds:?} gave {}",
                        inf.clause
                    );
                }
            }
        }
    }
    assert!(fired > 100, "only {fired} inferences");
}

#[test]
fn ground_irreflexivity_is_sound() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    let o = order();
    let terms = small_terms();
    let mut fired = 0;
    for _ in 0..400 {
        let c = random_clause(&mut rng, &terms, 3);
        for k in 0..c.len() {
            if let Some(inf) = irreflexivity_resolution(&c, k, &o) {
                fired += 1;
                assert!(entails(&[&c], &inf.clause), "{c} at {k} gave {}", inf.clause);
            }
        }
    }
    assert!(fired > 20, "only {fired} inferences");
}

fn with_ep(cs: &[OrderClause]) -> Vec<OrderClause> {
    let mut all = cs.to_vec();
    all.extend(endpoint_clauses());
    all
}

#[test]
fn saturation_agrees_with_brute_force_on_ground_sets() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    let o = order();
    let terms = small_terms();
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let cs: Vec<OrderClause> = (0..n).map(|_| random_clause(&mut rng, &terms, 3)).collect();
        let expected = brute_clause_sat(&cs);
        let r = saturate(&with_ep(&cs), &o, SaturationLimits::default());
        match r {
            SaturationResult::Unsat { .. } => {
                assert!(!expected, "case {i}: satisfiable set refuted");
                unsat += 1;
            }
            SaturationResult::Saturated { .. } => {
                assert!(expected, "case {i}: unsatisfiable set saturated");
                sat += 1;
            }
            SaturationResult::ResourceOut { .. } => panic!("case {i}: resource limit on a ground set"),
        }
    }
    assert!(sat > 30 && unsat > 30, "sat {sat} unsat {unsat}");
}

#[test]
fn strict_self_loop_is_refuted() {
    let cs = parse_clauses("{a < a}").unwrap();
    let r = saturate(&cs, &order(), SaturationLimits::default());
    assert!(r.is_unsat());
}

#[test]
fn endpoints_and_density_saturate() {
    let mut cs = parse_clauses("{bot < top}").unwrap();
    cs.extend(theory_clauses(&[], &Symbol::new("dens", 2, Origin::Density)));
    let o = ReductionOrder::new([Symbol::new("dens", 2, Origin::Density)].iter());
    let r = saturate(&cs, &o, SaturationLimits::default());
    assert!(matches!(r, SaturationResult::Saturated { .. }), "{r:?}");
}

fn delta_example() -> (Vec<OrderClause>, ReductionOrder) {
    let text = "{def1(x) <= bot, top <= p(f(x))}\n{top <= def2(x), p(x) < def1(x)}\n{def2(x) < top}";
    let cs = with_ep(&parse_clauses(text).unwrap());
    let syms = [
        Symbol::new("p", 1, Origin::Function),
        Symbol::new("f", 1, Origin::Function),
        Symbol::new("def1", 1, Origin::Function),
        Symbol::new("def2", 1, Origin::Function),
    ];
    (cs, ReductionOrder::new(syms.iter()))
}

#[test]
fn delta_projection_example_is_refuted() {
    let (cs, o) = delta_example();
    match saturate(&cs, &o, SaturationLimits::default()) {
        SaturationResult::Unsat { trace, stats } => {
            assert!(trace.is_refutation());
            assert!(stats.generated <= 1000, "{stats:?}");
        }
        r => panic!("expected a refutation, got {r:?}"),
    }
}

#[test]
fn trace_round_trips_through_replay() {
    let (cs, o) = delta_example();
    let SaturationResult::Unsat { trace, .. } = saturate(&cs, &o, SaturationLimits::default()) else {
        panic!("expected a refutation");
    };
    let text = trace.to_string();
    let parsed = parse_trace(&text).unwrap();
    let again = replay(&parsed).unwrap();
    assert_eq!(again.to_string(), text);
    assert_eq!(again, trace);
}

#[test]
fn replay_rejects_tampered_traces() {
    let (cs, o) = delta_example();
    let SaturationResult::Unsat { trace, .. } = saturate(&cs, &o, SaturationLimits::default()) else {
        panic!("expected a refutation");
    };
    let text = trace.to_string();

    let last = text.lines().last().unwrap();
    let truncated: String = text.lines().filter(|l| *l != last).map(|l| format!("{l}\n")).collect();
    assert_eq!(
        replay(&parse_trace(&truncated).unwrap()),
        Err(ReplayError::NotRefutation)
    );

    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let derived = lines.iter().position(|l| l.contains("[chain")).unwrap();
    let open = lines[derived].rfind('[').unwrap();
    let head = lines[derived][..lines[derived].find(':').unwrap()].to_string();
    lines[derived] = format!("{head}: {{a < b}} {}", &lines[derived][open..]);
    let forged: String = lines.iter().map(|l| format!("{l}\n")).collect();
    let err = parse_trace(&forged).and_then(|t| replay(&t));
    assert!(
        matches!(err, Err(ReplayError::Mismatch { .. }) | Err(ReplayError::Syntax { .. })),
        "{err:?}"
    );

    assert!(matches!(
        parse_trace("1: {a < a} [input]\n"),
        Err(ReplayError::Syntax { .. })
    ));
}
