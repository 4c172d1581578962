//! Truth-table oracles and random instance generators shared by the
//! integration tests. Nothing here calls the crate's SAT solver.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pqekit::circuit::{parse_aag, write_aag, Gate, Netlist};
use pqekit::cnf::{Assignment, Clause, Lit, QuantifiedCnf, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_clause(rng: &mut ChaCha8Rng, n_vars: u32, len: usize) -> Clause {
    let mut vars: Vec<u32> = (1..=n_vars).collect();
    vars.shuffle(rng);
    let lits = vars
        .into_iter()
        .take(len)
        .map(|v| Var::new(v).lit(rng.gen_bool(0.5)));
    Clause::new(lits).unwrap()
}

/// Random formula over `n_vars` variables, the first `n_free` of them free.
pub fn random_qcnf(
    rng: &mut ChaCha8Rng,
    n_vars: u32,
    n_free: u32,
    n_clauses: usize,
    max_len: usize,
) -> QuantifiedCnf {
    let clauses = (0..n_clauses)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min(n_vars as usize));
            random_clause(rng, n_vars, len)
        })
        .collect();
    let quantified: Vec<Var> = (n_free + 1..=n_vars).map(Var::new).collect();
    let free: Vec<Var> = (1..=n_free).map(Var::new).collect();
    QuantifiedCnf::with_partition(clauses, quantified, free).unwrap()
}

/// Dense value table `values[v]` for variable `v`, bits taken from `mask`
/// over the listed variables (first variable is the least significant bit).
pub fn table_assignment(vars: &[Var], mask: u64, values: &mut [bool]) {
    for (i, v) in vars.iter().enumerate() {
        values[v.index() as usize] = (mask >> i) & 1 == 1;
    }
}

pub fn eval_clause(c: &Clause, values: &[bool]) -> bool {
    c.lits()
        .iter()
        .any(|l| values[l.var().index() as usize] == l.is_positive())
}

pub fn eval_all(cs: &[Clause], values: &[bool]) -> bool {
    cs.iter().all(|c| eval_clause(c, values))
}

pub fn max_var(cs: &[Clause]) -> u32 {
    cs.iter()
        .flat_map(|c| c.vars())
        .map(|v| v.index())
        .max()
        .unwrap_or(0)
}

pub fn brute_sat(cs: &[Clause]) -> bool {
    let vars: Vec<Var> = cs
        .iter()
        .flat_map(|c| c.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut values = vec![false; max_var(cs) as usize + 1];
    (0..1u64 << vars.len()).any(|m| {
        table_assignment(&vars, m, &mut values);
        eval_all(cs, &values)
    })
}

/// `∃X[cs]` evaluated at the Y-point already written into `values`.
pub fn exists_x(cs: &[Clause], xs: &[Var], values: &mut [bool]) -> bool {
    (0..1u64 << xs.len()).any(|m| {
        table_assignment(xs, m, values);
        eval_all(cs, values)
    })
}

/// Truth table of `∃X[cs]` over `ys`, indexed by Y mask.
pub fn projection(cs: &[Clause], xs: &[Var], ys: &[Var]) -> Vec<bool> {
    let n = max_var(cs)
        .max(xs.iter().chain(ys).map(|v| v.index()).max().unwrap_or(0));
    let mut values = vec![false; n as usize + 1];
    (0..1u64 << ys.len())
        .map(|m| {
            table_assignment(ys, m, &mut values);
            exists_x(cs, xs, &mut values)
        })
        .collect()
}

/// Truth table of a quantifier-free clause set over `ys`.
pub fn table_of(cs: &[Clause], ys: &[Var]) -> Vec<bool> {
    projection(cs, &[], ys)
}

pub fn xs(f: &QuantifiedCnf) -> Vec<Var> {
    f.quantified().iter().copied().collect()
}

pub fn ys(f: &QuantifiedCnf) -> Vec<Var> {
    f.free().iter().copied().collect()
}

/// Independent check of `∃X[F] ≡ H ∧ ∃X[F \ G]`.
pub fn is_pqe_solution(f: &QuantifiedCnf, g: &[usize], h: &[Clause]) -> bool {
    let (x, y) = (xs(f), ys(f));
    let lhs = projection(f.clauses(), &x, &y);
    let rest: Vec<Clause> = f
        .clauses()
        .iter()
        .enumerate()
        .filter(|(i, _)| !g.contains(i))
        .map(|(_, c)| c.clone())
        .chain(h.iter().cloned())
        .collect();
    lhs == projection(&rest, &x, &y)
}

/// Whether `cs ⊨ q` by enumeration.
pub fn brute_implies(cs: &[Clause], q: &Clause) -> bool {
    let negated: Vec<Clause> = q
        .lits()
        .iter()
        .map(|&l| Clause::unit(!l))
        .collect();
    let mut all = cs.to_vec();
    all.extend(negated);
    !brute_sat(&all)
}

pub fn lits(v: &[i32]) -> Vec<Lit> {
    v.iter().map(|&x| Lit::from_dimacs(x)).collect()
}

pub fn asg(v: &[i32]) -> Assignment {
    Assignment::from_dimacs(v).unwrap()
}

pub fn clause(v: &[i32]) -> Clause {
    Clause::from_dimacs(v).unwrap()
}

pub const EXAMPLE1: &str = "p cnf 4 4\ne 3 4 0\n-3 4 0\n1 3 0\n1 -4 0\n2 4 0\n";

/// Gate-by-gate evaluation written against the public netlist view only.
pub fn eval_netlist(n: &Netlist, state: &[bool], inputs: &[bool]) -> Vec<bool> {
    let mut v = vec![false; n.len()];
    let (mut next_in, mut next_latch) = (0, 0);
    for (i, g) in n.gates().iter().enumerate() {
        v[i] = match *g {
            Gate::Input => {
                next_in += 1;
                inputs[next_in - 1]
            }
            Gate::Latch => {
                next_latch += 1;
                state[next_latch - 1]
            }
            Gate::Const(b) => b,
            Gate::Buf(a) => v[a.index()],
            Gate::Not(a) => !v[a.index()],
            Gate::And(a, b) => v[a.index()] && v[b.index()],
            Gate::Or(a, b) => v[a.index()] || v[b.index()],
            Gate::Xor(a, b) => v[a.index()] ^ v[b.index()],
            Gate::Mux { sel, hi, lo } => {
                if v[sel.index()] {
                    v[hi.index()]
                } else {
                    v[lo.index()]
                }
            }
        };
    }
    v
}

pub fn step(n: &Netlist, state: &[bool], inputs: &[bool]) -> Vec<bool> {
    let v = eval_netlist(n, state, inputs);
    n.latches().iter().map(|l| v[l.next.unwrap().index()]).collect()
}

pub fn outputs_of(n: &Netlist, state: &[bool], inputs: &[bool]) -> Vec<bool> {
    let v = eval_netlist(n, state, inputs);
    n.outputs().iter().map(|(_, s)| v[s.index()]).collect()
}

pub fn bits(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| (mask >> i) & 1 == 1).collect()
}

/// Largest shortest-path distance from the initial state.
pub fn bfs_diameter(n: &Netlist) -> usize {
    let ni = n.inputs().len();
    let mut seen = BTreeSet::from([n.initial_state()]);
    let mut frontier = vec![n.initial_state()];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for s in &frontier {
            for m in 0..1u64 << ni {
                let t = step(n, s, &bits(m, ni));
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            return depth;
        }
        depth += 1;
        frontier = next;
    }
}

/// Flips one AND fan-in of the ASCII AIGER text of `n`; None when `n`
/// has no AND gates.
pub fn mutate_aag(n: &Netlist, rng: &mut ChaCha8Rng) -> Option<Netlist> {
    let text = write_aag(n).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header: Vec<usize> = lines[0].split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
    let (i, l, o, a) = (header[1], header[2], header[3], header[4]);
    if a == 0 {
        return None;
    }
    let row = 1 + i + l + o + rng.gen_range(0..a);
    let mut f: Vec<u64> = lines[row].split_whitespace().map(|x| x.parse().unwrap()).collect();
    let k = rng.gen_range(1..3);
    f[k] ^= 1;
    lines[row] = format!("{} {} {}", f[0], f[1], f[2]);
    Some(parse_aag(&(lines.join("\n") + "\n")).unwrap())
}

/// Combinational truth table: one output vector per input mask.
pub fn comb_table(n: &Netlist) -> Vec<Vec<bool>> {
    let ni = n.inputs().len();
    (0..1u64 << ni).map(|m| outputs_of(n, &[], &bits(m, ni))).collect()
}

/// Random formula with clause 0 planted as blocked on a quantified variable.
pub fn planted(r: &mut rand_chacha::ChaCha8Rng) -> (QuantifiedCnf, Var) {
    let n = r.gen_range(4..=12);
    let n_free = r.gen_range(1..n - 1);
    let m = r.gen_range(2..=30);
    let base = random_qcnf(r, n, n_free, m, 4);
    let x = Var::new(r.gen_range(n_free + 1..=n));
    let k = r.gen_range(2..=4);
    let mut c = random_clause(r, n, k);
    if c.literal_of(x).is_none() {
        c = c.extended([x.lit(r.gen_bool(0.5))]).unwrap();
    }
    let lx = c.literal_of(x).unwrap();
    let other: Vec<Lit> = c.lits().iter().copied().filter(|l| l.var() != x).collect();
    let mut clauses = vec![c];
    for d in base.clauses() {
        if !d.contains(!lx) {
            clauses.push(d.clone());
            continue;
        }
        // Force a second clash so that no resolvent on x exists.
        let l = other[r.gen_range(0..other.len())];
        let lits: Vec<Lit> = d
            .lits()
            .iter()
            .copied()
            .filter(|m| m.var() != l.var())
            .chain([!l])
            .collect();
        clauses.push(Clause::new(lits).unwrap());
    }
    let quantified: Vec<Var> = (n_free + 1..=n).map(Var::new).collect();
    let free: Vec<Var> = (1..=n_free).map(Var::new).collect();
    (QuantifiedCnf::with_partition(clauses, quantified, free).unwrap(), x)
}
