//! Looks for unwanted invariants of a buggy FIFO. A proved clause over
//! the data buffer alone (say "no slot ever holds 5") points at the bug.
//!
//!     cargo run --release --example fifo_bug_hunt [n] [bug] [runs] [run-secs]
//!
//! `bug` is one of none, skip_val, replace_val, consec_val.

use std::time::Duration;

use pqekit::circuit::Bug;
use pqekit::invgen::{fifo_summary_csv, run_fifo_pipeline, CandidateStatus, FifoPipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(8), |s| s.parse())?;
    let bug: Bug = args.get(1).map_or(Ok(Bug::SkipVal), |s| s.parse())?;
    let runs: u64 = args.get(2).map_or(Ok(3), |s| s.parse())?;
    let secs: u64 = args.get(3).map_or(Ok(30), |s| s.parse())?;

    let mut reports = Vec::new();
    for seed in 0..runs {
        let mut cfg = FifoPipelineConfig::new(n, bug, seed);
        cfg.engine.time_budget = Some(Duration::from_secs(2));
        cfg.run_budget = Duration::from_secs(secs);
        let rep = run_fifo_pipeline(&cfg)?;
        let global = rep.candidates.iter().filter(|c| c.status == CandidateStatus::Global).count();
        println!(
            "seed {seed}: {} problems, {} candidates, {global} global, {:.1}s",
            rep.problems_tried,
            rep.candidates.len(),
            rep.runtime
        );
        for c in rep.unwanted() {
            println!("  unwanted: {}", c.text);
        }
        reports.push(rep);
    }
    print!("\n{}", fifo_summary_csv(&reports));
    Ok(())
}
