//! Finds the reachability diameter of small circuits by asking, for
//! growing m, whether every state is reachable in fewer than m steps.

use pqekit::circuit::Netlist;
use pqekit::invgen::diameter_check;
use pqekit::pqe::EngineConfig;

/// Counter of the given width that only moves when `en` is set.
fn counter(width: usize) -> Netlist {
    let mut n = Netlist::new();
    let en = n.input("en");
    let mut carry = en;
    for i in 0..width {
        let b = n.latch(format!("c{i}"), false);
        let next = n.xor(b, carry);
        carry = n.and(b, carry);
        n.set_next(b, next);
    }
    n
}

/// Shift register loaded from one input.
fn shifter(len: usize) -> Netlist {
    let mut n = Netlist::new();
    let mut prev = n.input("d");
    for i in 0..len {
        let b = n.latch(format!("r{i}"), false);
        n.set_next(b, prev);
        prev = b;
    }
    n
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EngineConfig {
        clause_cap: None,
        ..EngineConfig::default()
    };
    for (name, n) in [("2-bit counter", counter(2)), ("3-bit counter", counter(3)), ("4-stage shifter", shifter(4))] {
        let m = (1..).find(|&m| diameter_check(&n, m, &cfg).unwrap_or(false)).expect("finite");
        println!("{name}: diameter {}", m - 1);
    }
    Ok(())
}
