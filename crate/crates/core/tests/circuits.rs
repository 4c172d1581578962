mod common;

use std::collections::{BTreeSet, VecDeque};

use common::*;
use pqekit::circuit::{
    gen_fifo, parse_aag, random_combinational, random_sequential, simulate, simulate3v, tseitin_encode, unroll,
    write_aag, Bug, Gate, Netlist, Ternary,
};
use pqekit::cnf::{Assignment, Clause, QuantifiedCnf, Var};
use pqekit::invgen::{
    check_global_invariant, diameter_check, gen_local_invariant_in, holds_in, local_targets, to_state_clause,
    CheckConfig, GlobalCheck,
};
use pqekit::pqe::EngineConfig;
use pqekit::propgen::{
    bug_exposing_tests, generate_property, single_test_property, split_clause, symbsim_property, symbsim_targets,
    verify_symbsim_property,
};
use pqekit::reductions::{eq_check_pqe, interpolant_by_pqe, sat_by_pqe, CraigCheck, EqVerdict, InterpolationResult};
use pqekit::verify::check_implication;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn cfg() -> EngineConfig {
    EngineConfig {
        time_budget: None,
        clause_cap: None,
        ..EngineConfig::default()
    }
}

#[test]
fn tseitin_projection_is_the_circuit_function() {
    let mut r = rng(11);
    for _ in 0..40 {
        let ni = r.gen_range(1..=4);
        let (a1,) = (r.gen_range(2..=8),);
        let n = random_combinational(&mut r, ni, a1, 2);
        let enc = tseitin_encode(&n);
        let f = &enc.formula;
        let ins: Vec<Var> = n.input_signals().iter().map(|&s| enc.var(s)).collect();
        let outs: Vec<Var> = n.output_signals().iter().map(|&s| enc.var(s)).collect();
        if outs.iter().collect::<BTreeSet<_>>().len() < outs.len() || outs.iter().any(|o| ins.contains(o)) {
            continue;
        }
        let mut ys = ins.clone();
        ys.extend(&outs);
        let xs: Vec<Var> = f.quantified().iter().copied().collect();
        let got = projection(f.clauses(), &xs, &ys);
        for (m, &ok) in got.iter().enumerate() {
            let m = m as u64;
            let want = outputs_of(&n, &[], &bits(m, ni)) == bits(m >> ni, outs.len());
            assert_eq!(ok, want);
        }
    }
}

#[test]
fn aiger_round_trip_preserves_behaviour() {
    let mut r = rng(12);
    for _ in 0..50 {
        let ni = r.gen_range(1..=3);
        let nl = r.gen_range(0..=3);
        let (a2,) = (r.gen_range(1..=10),);
        let n = random_sequential(&mut r, ni, nl, a2);
        let text = write_aag(&n).unwrap();
        let back = parse_aag(&text).unwrap();
        assert_eq!(write_aag(&back).unwrap(), text);
        let ins: Vec<Vec<bool>> = (0..6).map(|_| (0..ni).map(|_| r.gen_bool(0.5)).collect()).collect();
        assert_eq!(simulate(&n, &ins), simulate(&back, &ins));
    }
}

#[test]
fn unrolling_reaches_exactly_the_simulated_states() {
    let mut r = rng(13);
    for _ in 0..15 {
        let (a1, a2) = (r.gen_range(1..=3), r.gen_range(2..=6));
        let n = random_sequential(&mut r, 1, a1, a2);
        let k = r.gen_range(1..=3);
        let u = unroll(&n, k, true).unwrap();
        let nl = n.latches().len();
        let mut reach = BTreeSet::new();
        for m in 0..1u64 << k {
            let mut s = n.initial_state();
            for j in 0..k {
                s = step(&n, &s, &bits(m >> j, 1));
            }
            reach.insert(s);
        }
        for m in 0..1u64 << nl {
            let s = bits(m, nl);
            let neg: Vec<Clause> = vec![Clause::new(u.frames.state_lits(k, &s).into_iter().map(|l| !l)).unwrap()];
            let unreachable = check_implication(u.formula.clauses(), &neg, None).unwrap();
            assert_eq!(!unreachable, reach.contains(&s));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ternary_simulation_is_monotone(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let ni = r.gen_range(1..=3);
        let (a1, a2) = (r.gen_range(1..=3), r.gen_range(2..=10));
        let n = random_sequential(&mut r, ni, a1, a2);
        let steps = 4;
        let concrete: Vec<Vec<bool>> = (0..steps).map(|_| (0..ni).map(|_| r.gen_bool(0.5)).collect()).collect();
        let abstracted: Vec<Vec<Ternary>> = concrete
            .iter()
            .map(|v| v.iter().map(|&b| if r.gen_bool(0.4) { Ternary::X } else { Ternary::from(b) }).collect())
            .collect();
        let t3 = simulate3v(&n, &abstracted);
        let t2 = simulate(&n, &concrete);
        for (s3, s2) in t3.states.iter().zip(&t2.states) {
            for (&a, &b) in s3.iter().zip(s2) {
                prop_assert!(a.refines_to(Ternary::from(b)));
            }
        }
    }
}

/// Reference queue: index 0 is the newest slot; reads take slot `size-1`.
struct QueueModel {
    slots: Vec<u64>,
    size: usize,
    dout: u64,
}

impl QueueModel {
    fn step(&mut self, bug: Bug, val: u64, wr: bool, rd: bool, din: u64, p: usize) {
        let n = self.slots.len();
        let do_rd = rd && self.size > 0;
        let room = self.size < n || do_rd;
        let mut do_wr = wr && room;
        match bug {
            Bug::SkipVal => do_wr &= din != val,
            Bug::ConsecVal => do_wr &= !(din == val && self.slots[0] == val),
            _ => {}
        }
        if do_rd {
            self.dout = self.slots[self.size - 1];
        }
        if do_wr {
            self.slots.rotate_right(1);
            self.slots[0] = if bug == Bug::ReplaceVal && din == val { pqekit::circuit::replacement(val, p) } else { din };
        }
        self.size = self.size + do_wr as usize - do_rd as usize;
    }
}

#[test]
fn fifo_matches_reference_queue() {
    let mut r = rng(14);
    for bug in [Bug::None, Bug::SkipVal, Bug::ReplaceVal, Bug::ConsecVal] {
        for n in [2, 3, 4] {
            let (p, val) = (3, 5);
            let f = gen_fifo(n, p, val, bug).unwrap();
            let mut model = QueueModel { slots: vec![0; n], size: 0, dout: 0 };
            let mut state = f.netlist.initial_state();
            let mut queue: VecDeque<u64> = VecDeque::new();
            for _ in 0..200 {
                let (wr, rd) = (r.gen_bool(0.6), r.gen_bool(0.4));
                let din = if r.gen_bool(0.3) { val } else { r.gen_range(0..8) };
                if bug == Bug::None {
                    if rd && !queue.is_empty() {
                        assert_eq!(queue.pop_back(), Some(model.slots[model.size - 1]));
                    }
                    if wr && (queue.len() < n || (rd && model.size > 0)) {
                        queue.push_front(din);
                    }
                }
                model.step(bug, val, wr, rd, din, p);
                state = step(&f.netlist, &state, &f.inputs(wr, rd, din));
                assert_eq!(f.size_of(&state), model.size as u64);
                assert_eq!(f.dout_of(&state), model.dout);
                for i in 0..n {
                    assert_eq!(f.slot(&state, i), model.slots[i]);
                }
                if bug == Bug::SkipVal {
                    assert!(!f.contains_val(&state));
                }
                if bug == Bug::None {
                    assert_eq!(queue.len(), model.size);
                }
            }
        }
    }
}

#[test]
fn diameter_check_matches_bfs() {
    let mut r = rng(15);
    for _ in 0..20 {
        let (a0, a1, a2) = (r.gen_range(1..=2), r.gen_range(1..=3), r.gen_range(2..=6));
        let n = random_sequential(&mut r, a0, a1, a2);
        let d = bfs_diameter(&n);
        for m in 1..=d + 1 {
            assert_eq!(diameter_check(&n, m, &cfg()).unwrap(), d < m, "d={d} m={m}");
        }
    }
}

#[test]
fn equivalence_check_matches_truth_tables() {
    let mut r = rng(16);
    let (mut eq, mut neq) = (0, 0);
    for _ in 0..60 {
        let ni = r.gen_range(1..=4);
        let (a1, a2) = (r.gen_range(2..=8), r.gen_range(1..=2));
        let n1 = random_combinational(&mut r, ni, a1, a2);
        let Some(n2) = mutate_aag(&n1, &mut r) else { continue };
        let (t1, t2) = (comb_table(&n1), comb_table(&n2));
        let rep = eq_check_pqe(&n1, &n2, &cfg()).unwrap();
        assert_eq!(rep.verdict.is_equivalent(), t1 == t2);
        if let EqVerdict::Inequivalent { cex } = &rep.verdict {
            let m = cex.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum::<usize>();
            assert_ne!(t1[m], t2[m]);
            neq += 1;
        } else {
            eq += 1;
        }
    }
    assert!(eq > 0 && neq > 0);
}

fn random_unsat_pair(r: &mut rand_chacha::ChaCha8Rng) -> (Vec<Clause>, Vec<Clause>) {
    loop {
        let nv = r.gen_range(3..=8);
        let a: Vec<Clause> = (0..r.gen_range(1..=6)).map(|_| {
                let len = r.gen_range(1..=3);
                random_clause(r, nv, len)
            }).collect();
        let b: Vec<Clause> = (0..r.gen_range(1..=6)).map(|_| {
                let len = r.gen_range(1..=3);
                random_clause(r, nv, len)
            }).collect();
        let all: Vec<Clause> = a.iter().chain(&b).cloned().collect();
        if !brute_sat(&all) {
            return (a, b);
        }
    }
}

#[test]
fn interpolants_satisfy_craig_conditions() {
    let mut r = rng(17);
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..100 {
        let (a, b) = random_unsat_pair(&mut r);
        let shared: BTreeSet<Var> = a
            .iter()
            .flat_map(|c| c.vars())
            .filter(|v| b.iter().any(|d| d.vars().any(|w| w == *v)))
            .collect();
        match interpolant_by_pqe(&a, &b, &cfg()).unwrap() {
            InterpolationResult::Interpolant { clauses } => {
                accepted += 1;
                assert!(clauses.iter().flat_map(|c| c.vars()).all(|v| shared.contains(&v)));
                assert!(clauses.iter().all(|c| brute_implies(&a, c)));
                let ib: Vec<Clause> = clauses.iter().chain(&b).cloned().collect();
                assert!(!brute_sat(&ib));
            }
            InterpolationResult::NotAnInterpolant { clauses, failed } => {
                rejected += 1;
                let genuine = match failed {
                    CraigCheck::SharedVariables => clauses.iter().flat_map(|c| c.vars()).any(|v| !shared.contains(&v)),
                    CraigCheck::AImpliesI => !clauses.iter().all(|c| brute_implies(&a, c)),
                    CraigCheck::IAndBUnsat => brute_sat(&clauses.iter().chain(&b).cloned().collect::<Vec<_>>()),
                };
                assert!(genuine);
                let ab: Vec<Clause> = a.iter().chain(&b).cloned().collect();
                assert!(clauses.iter().all(|c| brute_implies(&ab, c)));
            }
        }
    }
    assert!(accepted > rejected, "{accepted} {rejected}");
    let sat = [clause(&[1])];
    assert!(interpolant_by_pqe(&sat, &[clause(&[1, 2])], &cfg()).is_err());
}

#[test]
fn sat_by_take_out_matches_brute_force() {
    let mut r = rng(18);
    for _ in 0..300 {
        let nv = r.gen_range(2..=8);
        let cs: Vec<Clause> = (0..r.gen_range(1..=30)).map(|_| {
                let len = r.gen_range(1..=3);
                random_clause(&mut r, nv, len)
            }).collect();
        let x: Assignment = (1..=nv).map(|v| (Var::new(v), r.gen_bool(0.5))).collect();
        assert_eq!(sat_by_pqe(&cs, &x, &cfg()).unwrap(), brute_sat(&cs));
    }
}

#[test]
fn splitting_preserves_the_formula() {
    let mut r = rng(19);
    for _ in 0..100 {
        let m = r.gen_range(2..=10);
        let f = random_qcnf(&mut r, 7, 3, m, 3);
        let t = r.gen_range(0..f.len());
        let c = f.clause(t).unwrap().clone();
        let mut outside: Vec<Var> = (1..=7).map(Var::new).filter(|&v| c.literal_of(v).is_none()).collect();
        outside.shuffle(&mut r);
        outside.truncate(r.gen_range(1..=outside.len().max(1)));
        if outside.is_empty() {
            continue;
        }
        let v: Assignment = outside.iter().map(|&x| (x, r.gen_bool(0.5))).collect();
        let (g, t2) = split_clause(&f, t, &outside, &v).unwrap();
        assert_eq!(g.len(), f.len() + outside.len());
        assert!(g.clause(t2).unwrap().len() == c.len() + outside.len());
        let all: Vec<Var> = (1..=7).map(Var::new).collect();
        assert_eq!(table_of(f.clauses(), &all), table_of(g.clauses(), &all));
        assert!(v.lits().iter().all(|&l| !g.clause(t2).unwrap().contains(l)));
    }
}

#[test]
fn single_test_properties_are_implied() {
    let mut r = rng(20);
    for _ in 0..40 {
        let ni = r.gen_range(1..=4);
        let (a1,) = (r.gen_range(1..=8),);
        let n = random_combinational(&mut r, ni, a1, 1);
        let v: Vec<bool> = (0..ni).map(|_| r.gen_bool(0.5)).collect();
        let Ok(q) = single_test_property(&n, &v, 0) else { continue };
        let enc = tseitin_encode(&n);
        assert!(brute_implies(enc.formula.clauses(), &q));
        assert_eq!(q.len(), ni + 1);
    }
}

/// `F_k ∧ B ⊨ q` by enumerating input sequences through the evaluator.
fn symbsim_oracle(n: &Netlist, u: &pqekit::circuit::Unrolling, b: &Clause, q: &Clause) -> bool {
    let (k, ni) = (u.k(), n.inputs().len());
    let mut values = vec![false; u.formula.max_var() as usize + 1];
    (0..1u64 << (k * ni)).all(|m| {
        let mut s = n.initial_state();
        for (v, &x) in u.frames.states[0].iter().zip(&s) {
            values[v.index() as usize] = x;
        }
        for j in 0..k {
            let ins = bits(m >> (j * ni), ni);
            for (v, &x) in u.frames.inputs[j].iter().zip(&ins) {
                values[v.index() as usize] = x;
            }
            s = step(n, &s, &ins);
        }
        for (v, &x) in u.frames.states[k].iter().zip(&s) {
            values[v.index() as usize] = x;
        }
        !eval_clause(b, &values) || eval_clause(q, &values)
    })
}

#[test]
fn symbolic_simulation_properties_match_enumeration() {
    let mut r = rng(21);
    let mut emitted = 0;
    for _ in 0..12 {
        let (a1, a2) = (r.gen_range(2..=4), r.gen_range(3..=8));
        let n = random_sequential(&mut r, 2, a1, a2);
        let k = r.gen_range(1..=3);
        let u = unroll(&n, k, true).unwrap();
        let mut last = u.frames.states[k].clone();
        last.shuffle(&mut r);
        last.truncate(2);
        let b = Clause::new(last.iter().map(|&v| v.lit(r.gen_bool(0.5)))).unwrap();
        let mut targets = symbsim_targets(&u, &b).unwrap();
        targets.shuffle(&mut r);
        for &t in targets.iter().take(4) {
            let p = symbsim_property(&u, &b, t, &cfg()).unwrap();
            for q in &p.clauses {
                emitted += 1;
                assert!(q.vars().all(|v| u.frames.locate_input(v).is_some() || u.frames.states[0].contains(&v)));
                assert!(symbsim_oracle(&n, &u, &b, q));
                assert!(verify_symbsim_property(&u, &b, q).unwrap());
            }
        }
        let pool: Vec<Var> = u.frames.inputs.iter().flatten().copied().collect();
        for _ in 0..5 {
            let mut vs = pool.clone();
            vs.shuffle(&mut r);
            vs.truncate(r.gen_range(1..=vs.len()));
            let q = Clause::new(vs.iter().map(|&v| v.lit(r.gen_bool(0.5)))).unwrap();
            assert_eq!(verify_symbsim_property(&u, &b, &q).unwrap(), symbsim_oracle(&n, &u, &b, &q));
        }
    }
    assert!(emitted > 0);
}

#[test]
fn bug_exposing_test_writes_val_into_the_fifo() {
    let (n, p, val, k) = (2, 2, 1, 2);
    let buggy = gen_fifo(n, p, val, Bug::SkipVal).unwrap();
    let good = gen_fifo(n, p, val, Bug::None).unwrap();
    let u = unroll(&buggy.netlist, k, true).unwrap();
    let sk = &u.frames.states[k];
    let q = Clause::new(buggy.data[0].iter().enumerate().map(|(b, &i)| sk[i].lit((val >> b) & 1 == 0))).unwrap();
    // Candidates: definitions of gates fed by the inputs alone.
    let mut pure = Vec::new();
    for g in buggy.netlist.gates() {
        let p = match g {
            Gate::Latch => false,
            g => g.fanins().iter().all(|s| pure[s.index()]),
        };
        pure.push(p);
    }
    let candidates: Vec<usize> = u
        .defs
        .iter()
        .filter(|d| u.frames.signals.iter().any(|f| f.iter().enumerate().any(|(s, &v)| v == d.out && pure[s])))
        .flat_map(|d| d.clauses.clone())
        .collect();
    let inputs: Vec<Var> = u.frames.inputs.iter().flatten().copied().collect();
    let res = bug_exposing_tests(u.formula.clauses(), &q, Some(&candidates), &inputs, 4).unwrap();
    assert!(!res.removed.is_empty() && !res.tests.is_empty());
    for t in &res.tests {
        let seq: Vec<Vec<bool>> = u.frames.inputs.iter().map(|f| f.iter().map(|&v| t.value(v).unwrap()).collect()).collect();
        let writes_val = seq.iter().any(|f| f[0] && f[2..].iter().enumerate().map(|(b, &x)| (x as u64) << b).sum::<u64>() == val);
        assert!(writes_val);
        let s = simulate(&good.netlist, &seq);
        assert_eq!(good.slot(s.last_state(), 0), val);
    }
}

#[test]
fn global_verdicts_agree_with_simulation_and_traces_replay() {
    let mut r = rng(22);
    let check = CheckConfig {
        bmc_bound: 10,
        kind_depth: 6,
        ..CheckConfig::default()
    };
    let (mut global, mut falsified) = (0, 0);
    for _ in 0..25 {
        let (a1, a2) = (r.gen_range(2..=4), r.gen_range(3..=8));
        let n = random_sequential(&mut r, 1, a1, a2);
        let k = r.gen_range(1..=3);
        let u = unroll(&n, k, true).unwrap();
        let reach = reachable(&n);
        let mut ts = local_targets(&u);
        ts.shuffle(&mut r);
        for &t in ts.iter().take(3) {
            let p = gen_local_invariant_in(&u, t, &cfg()).unwrap();
            for c in &p.clauses {
                let q = to_state_clause(&u, c).unwrap();
                for m in 0..1u64 << k {
                    let mut s = n.initial_state();
                    for j in 0..k {
                        s = step(&n, &s, &bits(m >> j, 1));
                    }
                    assert!(holds_in(&q, &s));
                }
                match check_global_invariant(&n, &q, &check).unwrap() {
                    GlobalCheck::Global { .. } => {
                        global += 1;
                        assert!(reach.iter().all(|s| holds_in(&q, s)));
                    }
                    GlobalCheck::Falsified { trace } => {
                        falsified += 1;
                        assert!(trace.replays(&n, &q));
                        assert!(!holds_in(&q, trace.states.last().unwrap()));
                    }
                    GlobalCheck::Unknown => {}
                }
            }
        }
    }
    assert!(global > 0 && falsified > 0, "{global} {falsified}");
}

fn reachable(n: &Netlist) -> BTreeSet<Vec<bool>> {
    let ni = n.inputs().len();
    let mut seen = BTreeSet::from([n.initial_state()]);
    let mut todo = vec![n.initial_state()];
    while let Some(s) = todo.pop() {
        for m in 0..1u64 << ni {
            let t = step(n, &s, &bits(m, ni));
            if seen.insert(t.clone()) {
                todo.push(t);
            }
        }
    }
    seen
}

#[test]
fn generated_properties_are_implied() {
    let mut r = rng(23);
    for _ in 0..60 {
        let m = r.gen_range(3..=20);
        let f: QuantifiedCnf = random_qcnf(&mut r, 8, 3, m, 3);
        let t = r.gen_range(0..f.len());
        let p = generate_property(&f, t, &cfg()).unwrap();
        for q in &p.clauses {
            assert!(q.vars().all(|v| f.is_free(v)));
            assert!(brute_implies(f.clauses(), q));
        }
    }
}
