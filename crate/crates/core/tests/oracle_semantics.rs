mod common;

use std::collections::BTreeMap;

use common::{assignments, atom_names, brute_sat, brute_valid, constant, random_formula, value};
use gdelta::io::parse_formula;
use gdelta::oracle::{eval, ground_sat, ground_valid, order_types, OracleConfig, OracleError, Valuation};
use gdelta::{Origin, Symbol, Term};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn pred(name: &str) -> Term {
    Term::constant(Symbol::new(name, 0, Origin::Predicate))
}

/// Ordered set partitions of `n` items into blocks, where the lowest block
/// may sit at 0, the highest may sit at 1, and the rest lie strictly
/// between. Counted by brute force over level assignments.
fn brute_order_type_count(n: usize) -> usize {
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let mut seen = std::collections::BTreeSet::new();
    for v in assignments(&names) {
        let top = n as u32 + 1;
        // canonical form: rank of each atom among the distinct used levels, with 0/top kept
        let mut levels: Vec<u32> = v.values().copied().collect();
        levels.push(0);
        levels.push(top);
        levels.sort();
        levels.dedup();
        let key: Vec<usize> = names
            .iter()
            .map(|k| levels.iter().position(|&l| l == v[k]).unwrap())
            .collect();
        let at_top: Vec<bool> = names.iter().map(|k| v[k] == top).collect();
        seen.insert((key, at_top));
    }
    seen.len()
}

#[test]
fn order_type_counts_match_brute_force() {
    let cfg = OracleConfig::default();
    for n in 0..=4 {
        let atoms: Vec<Term> = (0..n).map(|i| pred(&format!("a{i}"))).collect();
        let got = order_types(&atoms, &cfg).unwrap().len();
        assert_eq!(got, brute_order_type_count(n), "n = {n}");
    }
    // frozen from the brute force above
    assert_eq!(order_types(&[pred("a")], &cfg).unwrap().len(), 3);
    assert_eq!(order_types(&[pred("a"), pred("b")], &cfg).unwrap().len(), 11);
}

#[test]
fn order_types_respect_the_cap() {
    let atoms: Vec<Term> = (0..8).map(|i| pred(&format!("a{i}"))).collect();
    assert_eq!(
        order_types(&atoms, &OracleConfig::default()),
        Err(OracleError::TooManyAtoms { count: 8, cap: 7 })
    );
}

#[test]
fn every_order_type_valuation_realizes_its_levels() {
    let atoms = [pred("a"), pred("b"), pred("c")];
    for ot in order_types(&atoms, &OracleConfig::default()).unwrap() {
        let v = ot.valuation();
        for x in &atoms {
            for y in &atoms {
                let (lx, ly) = (ot.level(x).unwrap(), ot.level(y).unwrap());
                assert_eq!(lx.cmp(&ly), v.get(x).unwrap().cmp(&v.get(y).unwrap()));
            }
        }
    }
}

#[test]
fn rational_evaluation() {
    let r = Rational64::new;
    let mut v = Valuation::new();
    v.set(pred("a"), r(1, 3));
    v.set(pred("b"), r(1, 2));
    let f = |s: &str| parse_formula(s).unwrap();
    assert_eq!(eval(&f("a & b"), &v).unwrap(), r(1, 3));
    assert_eq!(eval(&f("a | b"), &v).unwrap(), r(1, 2));
    assert_eq!(eval(&f("b -> a"), &v).unwrap(), r(1, 3));
    assert_eq!(eval(&f("~a"), &v).unwrap(), r(0, 1));
    assert_eq!(eval(&f("~ D a"), &v).unwrap(), r(1, 1));
    assert_eq!(eval(&f("a <-> b"), &v).unwrap(), r(1, 3));
}

#[test]
fn duality_fails_for_delta() {
    let cfg = OracleConfig::default();
    let f = |s: &str| parse_formula(s).unwrap();
    assert!(!ground_sat(&f("b & ~ D b"), &cfg).unwrap());
    assert!(!ground_valid(&f("~(b & ~ D b)"), &cfg).unwrap());
}

#[test]
fn delta_schemes_are_valid() {
    let cfg = OracleConfig::default();
    for s in [
        "D a -> a",
        "D a -> D D a",
        "D(a | b) -> (D a | D b)",
        "D a | ~ D a",
        "D(a -> b) -> (D a -> D b)",
        "D(a & b) <-> (D a & D b)",
        "D top",
        "~ D bot",
    ] {
        let m = parse_formula(s).unwrap();
        assert!(ground_valid(&m, &cfg).unwrap(), "{s}");
        assert!(brute_valid(&m), "{s}");
    }
    for s in ["a -> D a", "a | ~a", "D(a | ~a)"] {
        assert!(!ground_valid(&parse_formula(s).unwrap(), &cfg).unwrap(), "{s}");
    }
}

#[test]
fn random_formulas_agree_with_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    let cfg = OracleConfig::default();
    for _ in 0..400 {
        let m = random_formula(&mut rng, &["a", "b", "c"], 4);
        assert_eq!(ground_valid(&m, &cfg).unwrap(), brute_valid(&m), "{m:?}");
        assert_eq!(ground_sat(&m, &cfg).unwrap(), brute_sat(&m), "{m:?}");
    }
}

fn level_valuation(v: &BTreeMap<String, u32>, top: u32) -> Valuation {
    let mut val = Valuation::new();
    for (k, &l) in v {
        val.set(pred(k), Rational64::new(l as i64, top as i64));
    }
    val
}

proptest! {
    #[test]
    fn eval_matches_level_semantics(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_formula(&mut rng, &["a", "b"], 5);
        let names = atom_names(&m);
        let top = names.len() as u32 + 1;
        for v in assignments(&names) {
            let expected = Rational64::new(value(&m, &v, top) as i64, top as i64);
            prop_assert_eq!(eval(&m, &level_valuation(&v, top)).unwrap(), expected);
        }
    }

    #[test]
    fn valid_implies_sat(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_formula(&mut rng, &["a", "b", "c"], 4);
        let cfg = OracleConfig::default();
        if ground_valid(&m, &cfg).unwrap() {
            prop_assert!(ground_sat(&m, &cfg).unwrap());
        }
    }
}

#[test]
fn non_ground_clauses_are_rejected() {
    let cs = gdelta::parse_clauses("{x < c}").unwrap();
    assert!(matches!(
        gdelta::oracle::ground_clause_sat(&cs, &OracleConfig::default()),
        Err(OracleError::NonGround(_))
    ));
    let _ = constant("c");
}
