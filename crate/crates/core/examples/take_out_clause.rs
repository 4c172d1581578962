//! Takes the first clause out of a small formula with both engines and
//! prints the loop trace, the solution and the verifier's verdict.
//!
//!     cargo run --example take_out_clause [file.qdimacs] [clause]

use pqekit::cnf::parse_qdimacs;
use pqekit::pqe::{take_out, Engine, EngineConfig, LoopEvent};
use pqekit::verify::check_pqe_solution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = match args.first() {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("data/example1.qdimacs").to_string(),
    };
    let clause: usize = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let f = parse_qdimacs(&text)?;
    let target = clause - 1;
    println!("taking out clause {clause}: {}", f.clause(target)?);

    for engine in [Engine::Eg, Engine::EgPlus] {
        let sol = take_out(&f, target, &EngineConfig::with_engine(engine))?;
        println!("\n{engine:?} ({})", sol.status);
        for e in &sol.events {
            match e {
                LoopEvent::Added { clause, subspace } => {
                    println!("  subspace {:?}: add {clause}", subspace.lits().iter().map(|l| l.to_dimacs()).collect::<Vec<_>>())
                }
                LoopEvent::Plugged(p) => println!("  plug {} ({:?})", p.clause, p.source),
            }
        }
        print!("  H:\n{}", sol.to_dimacs());
        let report = check_pqe_solution(&f, &[target], &sol.clauses)?;
        println!("  verifier: {:?}", report.verdict);
    }
    Ok(())
}
