//! Decides satisfiability by taking the clauses falsified at a point out
//! of the fully quantified formula.

use pqekit::cnf::{Assignment, Clause, Var};
use pqekit::pqe::EngineConfig;
use pqekit::reductions::sat_by_pqe;

/// Three pigeons, two holes: variable `2p + h + 1` puts pigeon p in hole h.
fn pigeons() -> Vec<Clause> {
    let x = |p: i32, h: i32| 2 * p + h + 1;
    let mut cs: Vec<Clause> = (0..3).map(|p| Clause::from_dimacs(&[x(p, 0), x(p, 1)]).unwrap()).collect();
    for h in 0..2 {
        for p in 0..3 {
            for q in p + 1..3 {
                cs.push(Clause::from_dimacs(&[-x(p, h), -x(q, h)]).unwrap());
            }
        }
    }
    cs
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EngineConfig {
        clause_cap: None,
        ..EngineConfig::default()
    };
    let php = pigeons();
    let zeros: Assignment = (1..=6).map(|v| (Var::new(v), false)).collect();
    println!("3 pigeons, 2 holes: satisfiable = {}", sat_by_pqe(&php, &zeros, &cfg)?);

    let two: Vec<Clause> = php.into_iter().filter(|c| c.vars().all(|v| v.index() <= 4)).collect();
    println!("2 pigeons, 2 holes: satisfiable = {}", sat_by_pqe(&two, &zeros, &cfg)?);
    Ok(())
}
