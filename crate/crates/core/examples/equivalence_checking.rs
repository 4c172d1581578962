//! Checks two adders built differently for equivalence, then a copy with
//! one gate changed, which yields a counterexample.

use pqekit::circuit::{Netlist, Signal};
use pqekit::pqe::EngineConfig;
use pqekit::reductions::{eq_check_pqe, miter_check, EqVerdict};

/// Two-bit ripple adder; `alt` computes the carry as a majority vote.
fn adder(alt: bool, broken: bool) -> Netlist {
    let mut n = Netlist::new();
    let a: Vec<Signal> = (0..2).map(|i| n.input(format!("a{i}"))).collect();
    let b: Vec<Signal> = (0..2).map(|i| n.input(format!("b{i}"))).collect();
    let mut carry = n.constant(false);
    for i in 0..2 {
        let x = n.xor(a[i], b[i]);
        let s = n.xor(x, carry);
        n.output(format!("s{i}"), s);
        carry = if alt {
            let ab = n.and(a[i], b[i]);
            let ac = n.and(a[i], carry);
            let bc = if broken && i == 1 { n.or(b[i], carry) } else { n.and(b[i], carry) };
            n.or_all(&[ab, ac, bc])
        } else {
            let g = n.and(a[i], b[i]);
            let p = n.and(x, carry);
            n.or(g, p)
        };
    }
    n.output("cout", carry);
    n
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EngineConfig::default();
    for (name, other) in [("majority carry", adder(true, false)), ("broken carry", adder(true, true))] {
        let r = eq_check_pqe(&adder(false, false), &other, &cfg)?;
        match &r.verdict {
            EqVerdict::Inequivalent { cex } => {
                println!("{name}: inequivalent at output {:?}, inputs {cex:?}", r.output)
            }
            v => println!("{name}: {v:?}"),
        }
        println!("  plain miter agrees: {}", miter_check(&adder(false, false), &other)?.is_none() == r.verdict.is_equivalent());
    }
    Ok(())
}
