mod common;

use common::*;
use pqekit::cnf::{
    parse_qdimacs, resolvable_on, resolve, write_qdimacs, Assignment, Clause, QuantifiedCnf,
    Status, Var,
};
use proptest::prelude::*;
use rand::Rng;

fn sorted(mut cs: Vec<Clause>) -> Vec<Clause> {
    cs.sort();
    cs
}

fn random_assignment(r: &mut rand_chacha::ChaCha8Rng, vars: &[u32], p: f64) -> Assignment {
    let mut q = Assignment::new();
    for &v in vars {
        if r.gen_bool(p) {
            q.insert(Var::new(v), r.gen_bool(0.5));
        }
    }
    q
}

proptest! {
    #[test]
    fn cofactor_composes(seed in 0u64..100_000) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=20);
        let f = random_qcnf(&mut r, 8, 4, m, 4);
        let all: Vec<u32> = (1..=8).collect();
        let q = random_assignment(&mut r, &all, 0.3);
        let rest: Vec<u32> = all.iter().copied().filter(|&v| q.value(Var::new(v)).is_none()).collect();
        let s = random_assignment(&mut r, &rest, 0.3);
        let stepwise = f.cofactor(&q).cofactor(&s);
        let direct = f.cofactor(&q.union(&s).unwrap());
        prop_assert_eq!(&stepwise.origin, &direct.origin);
        prop_assert_eq!(sorted(stepwise.formula.clauses().to_vec()), sorted(direct.formula.clauses().to_vec()));
    }

    #[test]
    fn resolvents_are_implied(seed in 0u64..100_000) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=10);
        let (k1, k2) = (r.gen_range(1..=n as usize), r.gen_range(1..=n as usize));
        let c1 = random_clause(&mut r, n, k1);
        let c2 = random_clause(&mut r, n, k2);
        match resolvable_on(&c1, &c2) {
            Some(w) => {
                let res = resolve(&c1, &c2, w).unwrap();
                prop_assert!(brute_implies(&[c1.clone(), c2.clone()], &res) || res.is_empty() && !brute_sat(&[c1, c2]));
            }
            None => {
                for v in c1.vars() {
                    prop_assert!(resolve(&c1, &c2, v).is_err());
                }
            }
        }
    }

    #[test]
    fn qdimacs_round_trip(seed in 0u64..100_000) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=12);
        let (n_free, m) = (r.gen_range(0..=n), r.gen_range(0..=30));
        let f = random_qcnf(&mut r, n, n_free, m, 5);
        let text = write_qdimacs(&f);
        let g = parse_qdimacs(&text).unwrap();
        prop_assert_eq!(f.clauses(), g.clauses());
        prop_assert_eq!(f.quantified(), g.quantified());
        prop_assert_eq!(parse_qdimacs(&write_qdimacs(&g)).unwrap(), g);
    }
}

#[test]
fn planted_blocked_clauses_are_redundant() {
    let mut r = rng(144);
    for round in 0..200 {
        let (f, x) = planted(&mut r);
        assert!(f.is_blocked(0, x, &Assignment::new()).unwrap(), "round {round}");
        let (xv, yv) = (xs(&f), ys(&f));
        let rest = f.without_clauses(&[0]);
        assert_eq!(
            projection(f.clauses(), &xv, &yv),
            projection(rest.clauses(), &xv, &yv),
            "round {round}"
        );
    }
}

fn example1() -> QuantifiedCnf {
    parse_qdimacs(EXAMPLE1).unwrap()
}

#[test]
fn example_cofactor_and_blocking() {
    let f = example1();
    let fy = f.cofactor(&asg(&[-1, 2]));
    assert_eq!(
        fy.formula.clauses(),
        &[clause(&[-3, 4]), clause(&[3]), clause(&[-4])]
    );
    assert_eq!(fy.origin, vec![0, 1, 2]);
    assert_eq!(f.cofactor(&Assignment::new()).formula, f);

    let x3 = Var::new(3);
    assert!(f.is_blocked(0, x3, &asg(&[1])).unwrap());
    assert!(!f.is_blocked(0, x3, &Assignment::new()).unwrap());

    let pure = QuantifiedCnf::new(vec![clause(&[1, 5]), clause(&[1, -2])], [Var::new(5)]);
    assert!(pure.is_blocked(0, Var::new(5), &Assignment::new()).unwrap());
}

#[test]
fn example_evaluation_matches_enumeration() {
    let f = example1();
    assert_eq!(clause(&[-3, 4]).evaluate(&asg(&[3, -4])), Status::Falsified);
    assert_eq!(clause(&[-3, 4]).evaluate(&Assignment::new()), Status::Undetermined);
    assert_eq!(Clause::empty().evaluate(&Assignment::new()), Status::Falsified);
    assert_eq!(f.evaluate(&asg(&[1, 2, -3, -4])), Status::Satisfied);

    // Every full assignment the evaluator calls satisfied is a model.
    let vars: Vec<Var> = (1..=4).map(Var::new).collect();
    let mut values = vec![false; 5];
    for mask in 0..16 {
        table_assignment(&vars, mask, &mut values);
        let q: Assignment = vars.iter().map(|&v| (v, values[v.index() as usize])).collect();
        let sat = f.evaluate(&q) == Status::Satisfied;
        assert_eq!(sat, eval_all(f.clauses(), &values));
    }
}

#[test]
fn resolve_examples() {
    assert_eq!(
        resolve(&clause(&[-3, 4]), &clause(&[1, 3]), Var::new(3)).unwrap(),
        clause(&[1, 4])
    );
    assert_eq!(
        resolve(&clause(&[5]), &clause(&[-5]), Var::new(5)).unwrap(),
        Clause::empty()
    );
    assert!(resolve(&clause(&[1, 2]), &clause(&[-1, -2]), Var::new(1)).is_err());
}

#[test]
fn parser_errors_and_edge_cases() {
    let empty = parse_qdimacs("p cnf 1 0\n").unwrap();
    assert!(empty.is_empty() && empty.quantified().is_empty());
    assert_eq!(empty.free().iter().copied().collect::<Vec<_>>(), vec![Var::new(1)]);

    let err = parse_qdimacs("p cnf 2 1\n1 x 0\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    assert!(parse_qdimacs("p cnf 2 1\na 1 0\n1 2 0\n").is_err());
    assert!(parse_qdimacs("p cnf 2 1\n1 -1 0\n").is_err());
}
