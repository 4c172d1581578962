use rand::seq::SliceRandom;
use rand::Rng;

use super::{Netlist, Signal};

fn random_gate<R: Rng>(rng: &mut R, n: &mut Netlist, pool: &[Signal]) -> Signal {
    let mut pick = || *pool.choose(rng).expect("non-empty pool");
    let (a, b, c) = (pick(), pick(), pick());
    match rng.gen_range(0..6) {
        0 => n.not(a),
        1 | 2 => n.and(a, b),
        3 => n.or(a, b),
        4 => n.xor(a, b),
        _ => n.mux(a, b, c),
    }
}

/// Random acyclic netlist. Outputs are the last `n_outputs` gates, so the
/// deepest logic is always observable.
pub fn random_combinational<R: Rng>(
    rng: &mut R,
    n_inputs: usize,
    n_gates: usize,
    n_outputs: usize,
) -> Netlist {
    assert!(n_inputs > 0 && n_outputs <= n_gates);
    let mut n = Netlist::new();
    let mut pool: Vec<Signal> = (0..n_inputs).map(|i| n.input(format!("v{i}"))).collect();
    for _ in 0..n_gates {
        let g = random_gate(rng, &mut n, &pool);
        pool.push(g);
    }
    for (i, &s) in pool[pool.len() - n_outputs..].iter().enumerate() {
        n.output(format!("w{i}"), s);
    }
    n
}

/// Random sequential netlist with random initial values. Every latch
/// drives one output.
pub fn random_sequential<R: Rng>(
    rng: &mut R,
    n_inputs: usize,
    n_latches: usize,
    n_gates: usize,
) -> Netlist {
    let mut n = Netlist::new();
    let mut pool: Vec<Signal> = (0..n_inputs).map(|i| n.input(format!("v{i}"))).collect();
    let latches: Vec<Signal> = (0..n_latches)
        .map(|i| n.latch(format!("s{i}"), rng.gen_bool(0.5)))
        .collect();
    pool.extend(&latches);
    for _ in 0..n_gates {
        let g = random_gate(rng, &mut n, &pool);
        pool.push(g);
    }
    for (i, &l) in latches.iter().enumerate() {
        let next = *pool[n_inputs..].choose(rng).unwrap();
        n.set_next(l, next);
        n.output(format!("s{i}"), l);
    }
    n
}
