//! Interpolant of an unsatisfiable pair. A forces y1 through a case split
//! on its local variable, B forces !y1 through its own.

use pqekit::cnf::Clause;
use pqekit::pqe::EngineConfig;
use pqekit::reductions::{interpolant_by_pqe, InterpolationResult};

fn cl(l: &[i32]) -> Clause {
    Clause::from_dimacs(l).expect("valid clause")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Variables: 1 = y1, 2 = y2 shared; 3 = a (A only); 4 = b (B only).
    let a = vec![cl(&[-3, 1]), cl(&[3, 2]), cl(&[-2, 1])];
    let b = vec![cl(&[-1, 4]), cl(&[-4]), cl(&[2, 1])];
    match interpolant_by_pqe(&a, &b, &EngineConfig::default())? {
        InterpolationResult::Interpolant { clauses } => {
            println!("interpolant:");
            for c in clauses {
                println!("  {c}");
            }
        }
        InterpolationResult::NotAnInterpolant { clauses, failed } => {
            println!("{} clauses, fails {failed:?}", clauses.len())
        }
    }
    Ok(())
}
