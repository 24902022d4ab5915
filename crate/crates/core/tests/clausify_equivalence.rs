mod common;

use common::{brute_clause_sat, brute_sat, brute_valid, random_formula};
use gdelta::clausify::{cl_sat, cl_val, definitional_defs, theory_clauses};
use gdelta::io::{parse_formula, render_clause};
use gdelta::oracle::{ground_clause_sat, OracleConfig};
use gdelta::skolem::NameSupply;
use gdelta::{Formula, Origin, Symbol};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn wide() -> OracleConfig {
    OracleConfig {
        max_atoms: 7,
        max_terms: 16,
    }
}

fn names_for(m: &Formula) -> NameSupply {
    NameSupply::for_formulas([m])
}

#[test]
fn small_formulas_against_brute_force_clause_semantics() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..300 {
        let m = random_formula(&mut rng, &["a", "b"], 2);
        let sat = cl_sat(&m, &mut names_for(&m)).unwrap();
        let val = cl_val(&m, &mut names_for(&m)).unwrap();
        let terms = |cs: &[gdelta::OrderClause]| {
            let mut v: Vec<_> = cs.iter().flat_map(|c| c.basic_terms().into_iter().cloned()).collect();
            v.sort();
            v.dedup();
            v.len()
        };
        if terms(&sat) > 6 || terms(&val) > 6 {
            continue;
        }
        checked += 1;
        assert_eq!(brute_clause_sat(&sat), brute_sat(&m), "{m:?}");
        assert_eq!(brute_clause_sat(&val), !brute_valid(&m), "{m:?}");
    }
    assert!(checked >= 100, "only {checked} small instances");
}

#[test]
fn clause_count_is_linear_in_subformulas() {
    let m = parse_formula("(a -> b) & D(c | ~a)").unwrap();
    let (defs, _) = definitional_defs(&m, &mut names_for(&m)).unwrap();
    // and, imp, delta, or, not(= imp to bot)
    assert_eq!(defs.len(), 5);
    let cs = cl_val(&m, &mut names_for(&m)).unwrap();
    // 3 + 4 + 2 + 3 + 4 plus the root clause
    assert_eq!(cs.len(), 17);
}

#[test]
fn shared_subformulas_are_defined_once() {
    let m = parse_formula("(a -> b) | (a -> b)").unwrap();
    let (defs, _) = definitional_defs(&m, &mut names_for(&m)).unwrap();
    assert_eq!(defs.len(), 2);
}

#[test]
fn theory_for_a_binary_symbol() {
    let d = Symbol::new("dens", 2, Origin::Density);
    let g = Symbol::new("g", 2, Origin::Function);
    let th = theory_clauses(&[g], &d);
    assert_eq!(th.len(), 6);
    assert_eq!(
        render_clause(&th[0]),
        "{g(x1, x3) <= g(x2, x4), x1 < x2, x2 < x1, x3 < x4, x4 < x3}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cl_sat_matches_one_satisfiability(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_formula(&mut rng, &["a", "b", "c"], 3);
        let cs = cl_sat(&m, &mut names_for(&m)).unwrap();
        prop_assert_eq!(ground_clause_sat(&cs, &wide()).unwrap(), brute_sat(&m));
    }

    #[test]
    fn cl_val_matches_validity(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_formula(&mut rng, &["a", "b", "c"], 3);
        let cs = cl_val(&m, &mut names_for(&m)).unwrap();
        prop_assert_eq!(ground_clause_sat(&cs, &wide()).unwrap(), !brute_valid(&m));
    }

    #[test]
    fn clause_count_bounded_by_size(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_formula(&mut rng, &["a", "b", "c", "d"], 5);
        let cs = cl_val(&m, &mut names_for(&m)).unwrap();
        prop_assert!(cs.len() <= 4 * m.size() + 1);
    }
}
