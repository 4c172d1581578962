//! Eliminates the quantifiers of a formula by taking out every clause
//! with a quantified variable, then compares with brute-force projection.

use pqekit::cnf::{parse_qdimacs, Assignment, Status, Var};
use pqekit::pqe::{qe, EngineConfig};

// ∃x3 x4 [ (x3 | y1) & (!x3 | y2) & (x4 | !y1) & (!x4 | y2 | y1) ]
const FORMULA: &str = "p cnf 4 4\ne 3 4 0\n3 1 0\n-3 2 0\n4 -1 0\n-4 2 1 0\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_qdimacs(FORMULA)?;
    let sol = qe(&f, &EngineConfig::default())?;
    print!("quantifier-free equivalent:\n{}", sol.to_dimacs());

    for y1 in [false, true] {
        for y2 in [false, true] {
            let point: Assignment = [(Var::new(1), y1), (Var::new(2), y2)].into_iter().collect();
            let exists = [false, true].iter().any(|&x3| {
                [false, true].iter().any(|&x4| {
                    let mut q = point.clone();
                    q.insert(Var::new(3), x3);
                    q.insert(Var::new(4), x4);
                    f.evaluate(&q) == Status::Satisfied
                })
            });
            let h = sol.clauses.iter().all(|c| c.evaluate(&point) == Status::Satisfied);
            println!("y1={} y2={}: exists={exists} H={h}", y1 as u8, y2 as u8);
        }
    }
    Ok(())
}
