mod common;

use common::*;
use pqekit::cnf::{Clause, Lit, Var};
use pqekit::sat::{SatConfig, Session, SolveOutcome};
use proptest::prelude::*;
use rand::Rng;

fn random_assumptions(rng: &mut rand_chacha::ChaCha8Rng, n_vars: u32, k: usize) -> Vec<Lit> {
    random_clause(rng, n_vars, k).lits().to_vec()
}

#[test]
fn agrees_with_truth_table_and_failed_sets_are_sound() {
    let mut r = rng(11);
    for round in 0..200 {
        let n = r.gen_range(3..=12);
        let m = r.gen_range(1..=50);
        let f = random_qcnf(&mut r, n, n, m, 4);
        let seed = if round % 2 == 0 { 0 } else { round as u64 };
        let mut s = Session::with_clauses(
            SatConfig {
                seed,
                ..SatConfig::default()
            },
            f.clauses(),
        );
        let k = r.gen_range(0..=3);
        let assumptions = random_assumptions(&mut r, n, k);
        let mut with_units = f.clauses().to_vec();
        with_units.extend(assumptions.iter().map(|&l| Clause::unit(l)));
        let expected = brute_sat(&with_units);
        match s.solve(&assumptions) {
            SolveOutcome::Sat(model) => {
                assert!(expected, "round {round}: solver says SAT");
                for c in f.clauses() {
                    assert!(model.satisfies(c), "round {round}: model violates {c:?}");
                }
                for &a in &assumptions {
                    assert_eq!(model.lit_value(a), Some(true));
                }
                for c in f.clauses() {
                    for v in c.vars() {
                        assert!(model.value(v).is_some(), "model is not total");
                    }
                }
            }
            SolveOutcome::Unsat(failed) => {
                assert!(!expected, "round {round}: solver says UNSAT");
                assert!(failed.iter().all(|l| assumptions.contains(l)));
                let mut core = f.clauses().to_vec();
                core.extend(failed.iter().map(|&l| Clause::unit(l)));
                assert!(!brute_sat(&core), "round {round}: failed set is not a core");
                assert!(s.solve(&failed).is_unsat());
            }
            SolveOutcome::Unknown => panic!("no budget was set"),
        }
    }
}

#[test]
fn session_example_queries() {
    let f = pqekit::cnf::parse_qdimacs(EXAMPLE1).unwrap();
    let mut s = Session::with_clauses(SatConfig::default(), f.clauses());
    match s.solve(&lits(&[-1, 2])) {
        SolveOutcome::Unsat(failed) => assert!(failed.iter().all(|l| *l == Lit::from_dimacs(-1))),
        other => panic!("{other:?}"),
    }
    s.add_clause(&clause(&[1]));
    assert!(s.solve(&lits(&[-1])).is_unsat());
    let mut s = Session::new(SatConfig::default());
    s.add_clause(&clause(&[1]));
    match s.solve(&lits(&[1])) {
        SolveOutcome::Sat(m) => assert_eq!(m.value(Var::new(1)), Some(true)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let mut r = rng(5);
    let f = random_qcnf(&mut r, 40, 40, 170, 3);
    let run = || {
        let mut s = Session::with_clauses(
            SatConfig {
                seed: 9,
                conflict_budget: Some(50),
                shrink_failed: false,
                phase_saving: true,
            },
            f.clauses(),
        );
        (s.solve(&[]), s.stats())
    };
    assert_eq!(run(), run());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_clauses_never_revives_unsat_queries(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let f = random_qcnf(&mut r, 8, 8, 20, 3);
        let extra = random_qcnf(&mut r, 8, 8, 6, 3);
        let queries: Vec<Vec<Lit>> = (0..6).map(|_| random_assumptions(&mut r, 8, 3)).collect();
        let mut s = Session::with_clauses(SatConfig::default(), f.clauses());
        let before: Vec<bool> = queries.iter().map(|q| s.solve(q).is_unsat()).collect();
        for c in extra.clauses() {
            s.add_clause(c);
        }
        for (q, was_unsat) in queries.iter().zip(before) {
            if was_unsat {
                prop_assert!(s.solve(q).is_unsat());
            }
        }
    }
}
