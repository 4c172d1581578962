//! Properties of a full adder: take gate clauses out of its CNF with the
//! inputs and outputs free, then build a single-test property by
//! splitting a clause on every input.

use pqekit::circuit::{tseitin_encode, Netlist};
use pqekit::cnf::Assignment;
use pqekit::pqe::{take_out, Engine, EngineConfig};
use pqekit::propgen::{generate_property, single_test_property, split_case, split_clause};

fn full_adder() -> Netlist {
    let mut n = Netlist::new();
    let a = n.input("a");
    let b = n.input("b");
    let cin = n.input("cin");
    let ab = n.xor(a, b);
    let sum = n.xor(ab, cin);
    let g1 = n.and(a, b);
    let g2 = n.and(ab, cin);
    let cout = n.or(g1, g2);
    n.output("sum", sum);
    n.output("cout", cout);
    n
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = full_adder();
    let enc = tseitin_encode(&m);
    let f = &enc.formula;
    println!("{} clauses; free variables {:?}", f.len(), f.free().iter().map(|v| v.index()).collect::<Vec<_>>());

    for t in 0..f.len() {
        if !f.is_quantified_clause(t)? {
            continue;
        }
        let p = generate_property(f, t, &EngineConfig::default())?;
        for q in &p.clauses {
            println!("clause {:>2} ({}) gives property {q}", t + 1, f.clause(t)?);
        }
    }

    // Split an internal clause on all inputs at a = 1, b = 0, cin = 1.
    let v = [true, false, true];
    let inputs: Vec<_> = m.input_signals().iter().map(|&s| enc.var(s)).collect();
    let v_spl: Assignment = inputs.iter().zip(v).map(|(&x, b)| (x, b)).collect();
    let t = (0..f.len()).find(|&i| f.clauses()[i].vars().all(|x| !inputs.contains(&x))).expect("internal clause");
    let (g, tp) = split_clause(f, t, &inputs, &v_spl)?;
    let cfg = EngineConfig {
        generalize: false,
        ..EngineConfig::with_engine(Engine::Eg)
    };
    let sol = take_out(&g, tp, &cfg)?;
    println!("\nsplit take-out: {:?}, {} decisions", split_case(&sol), sol.stats.decisions);
    for w in 0..m.outputs().len() {
        println!("single-test property for {}: {}", m.outputs()[w].0, single_test_property(&m, &v, w)?);
    }
    Ok(())
}
