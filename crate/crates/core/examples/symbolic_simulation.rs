//! Properties of an unrolled 3-bit counter with an enable input: every
//! input sequence falsifying a property drives the counter to a state
//! falsifying `B`. Each clause is checked and compared with three-valued
//! simulation.

use std::collections::BTreeSet;

use pqekit::circuit::{unroll, Netlist};
use pqekit::cnf::Clause;
use pqekit::pqe::EngineConfig;
use pqekit::propgen::{beats_ternary_sim, symbsim_property, symbsim_targets, verify_symbsim_property};

fn counter() -> Netlist {
    let mut n = Netlist::new();
    let en = n.input("en");
    let bits: Vec<_> = (0..3).map(|i| n.latch(format!("c{i}"), false)).collect();
    let mut carry = en;
    for &b in &bits {
        let next = n.xor(b, carry);
        carry = n.and(b, carry);
        n.set_next(b, next);
        n.output(format!("c{}", b.0), b);
    }
    n
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = counter();
    let k = 4;
    let u = unroll(&n, k, true)?;
    // B says the counter does not end at 4 (c2 = 1, c1 = 0, c0 = 0).
    let s = &u.frames.states[k];
    let b = Clause::new([s[0].pos(), s[1].pos(), s[2].neg()])?;
    let en: Vec<_> = u.frames.inputs.iter().map(|f| f[0]).collect();
    println!("B = {b}; enable inputs {:?}", en.iter().map(|v| v.index()).collect::<Vec<_>>());

    let cfg = EngineConfig {
        clause_cap: Some(5),
        ..EngineConfig::default()
    };
    let targets = symbsim_targets(&u, &b)?;
    let mut seen = BTreeSet::new();
    for &t in &targets {
        for q in symbsim_property(&u, &b, t, &cfg)?.clauses {
            if seen.insert(q.to_string()) {
                println!(
                    "target {t:>3}: {q}  verified={} beyond ternary={}",
                    verify_symbsim_property(&u, &b, &q)?,
                    beats_ternary_sim(&n, &u, &q, &b)
                );
            }
        }
    }
    println!("{} targets, {} distinct properties", targets.len(), seen.len());
    Ok(())
}
