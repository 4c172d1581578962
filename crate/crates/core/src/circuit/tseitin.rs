use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{Gate, Netlist, Signal};
use crate::cnf::{Clause, Lit, QuantifiedCnf, Var};
use crate::error::Result;
use crate::sat::Model;

/// Clauses `clauses` of the encoding define `out` from `ins`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateDef {
    pub out: Var,
    pub ins: Vec<Var>,
    pub clauses: Range<usize>,
}

fn cl(lits: &[Lit]) -> Clause {
    Clause::new(lits.iter().copied()).expect("gate clauses are not tautologies")
}

/// Clauses of `out = g(ins)`. Inputs, latches and aliasing fanins are the
/// caller's business.
fn gate_clauses(g: Gate, out: Var, var: impl Fn(Signal) -> Var) -> Vec<Clause> {
    let c = out.pos();
    match g {
        Gate::Input | Gate::Latch => vec![],
        Gate::Const(b) => vec![cl(&[out.lit(b)])],
        Gate::Buf(a) => {
            let a = var(a).pos();
            vec![cl(&[!a, c]), cl(&[a, !c])]
        }
        Gate::Not(a) => {
            let a = var(a).pos();
            vec![cl(&[a, c]), cl(&[!a, !c])]
        }
        Gate::And(a, b) => {
            let (a, b) = (var(a).pos(), var(b).pos());
            if a == b {
                return vec![cl(&[!a, c]), cl(&[a, !c])];
            }
            vec![cl(&[!a, !b, c]), cl(&[a, !c]), cl(&[b, !c])]
        }
        Gate::Or(a, b) => {
            let (a, b) = (var(a).pos(), var(b).pos());
            if a == b {
                return vec![cl(&[!a, c]), cl(&[a, !c])];
            }
            vec![cl(&[a, b, !c]), cl(&[!a, c]), cl(&[!b, c])]
        }
        Gate::Xor(a, b) => {
            let (a, b) = (var(a).pos(), var(b).pos());
            if a == b {
                return vec![cl(&[!c])];
            }
            vec![
                cl(&[!a, !b, !c]),
                cl(&[a, b, !c]),
                cl(&[a, !b, c]),
                cl(&[!a, b, c]),
            ]
        }
        Gate::Mux { sel, hi, lo } => {
            let (s, h, l) = (var(sel).pos(), var(hi).pos(), var(lo).pos());
            let mut out = Vec::new();
            // Branch clauses collapse when a data input is the select itself.
            if h.var() == s.var() {
                out.push(cl(&[!s, c]));
            } else {
                out.push(cl(&[!s, !h, c]));
                out.push(cl(&[!s, h, !c]));
            }
            if l.var() == s.var() {
                out.push(cl(&[s, !c]));
            } else {
                out.push(cl(&[s, !l, c]));
                out.push(cl(&[s, l, !c]));
            }
            out
        }
    }
}

/// Gate clauses of one copy of the combinational core, `frame[s]` being the
/// variable of signal `s`.
pub(crate) fn frame_clauses(n: &Netlist, frame: &[Var]) -> Vec<Clause> {
    let mut out = Vec::new();
    for (i, &g) in n.gates().iter().enumerate() {
        out.extend(gate_clauses(g, frame[i], |s| frame[s.index()]));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    /// Free variables are the inputs, latch outputs and outputs; every other
    /// signal is quantified.
    pub formula: QuantifiedCnf,
    /// `vars[s]` is the variable of signal `s`.
    pub vars: Vec<Var>,
    pub defs: Vec<GateDef>,
}

impl Encoding {
    pub fn var(&self, s: Signal) -> Var {
        self.vars[s.index()]
    }
}

/// Tseitin encoding of the combinational core, one variable per signal.
pub fn tseitin_encode(n: &Netlist) -> Encoding {
    let vars: Vec<Var> = (1..=n.len() as u32).map(Var::new).collect();
    let mut clauses = Vec::new();
    let mut defs = Vec::new();
    for (i, &g) in n.gates().iter().enumerate() {
        let out = vars[i];
        let cs = gate_clauses(g, out, |s| vars[s.index()]);
        if !cs.is_empty() {
            let start = clauses.len();
            clauses.extend(cs);
            defs.push(GateDef {
                out,
                ins: g.fanins().iter().map(|s| vars[s.index()]).collect(),
                clauses: start..clauses.len(),
            });
        }
    }
    let free: BTreeSet<Var> = n
        .input_signals()
        .into_iter()
        .chain(n.latches().iter().map(|l| l.state))
        .chain(n.output_signals())
        .map(|s| vars[s.index()])
        .collect();
    let quantified: Vec<Var> = vars.iter().copied().filter(|v| !free.contains(v)).collect();
    let formula = QuantifiedCnf::with_partition(clauses, quantified, free).expect("disjoint partition");
    Encoding { formula, vars, defs }
}

/// Variables of every time frame of an unrolling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameMap {
    /// `states[j]`, `j = 0..=k`, in latch order.
    pub states: Vec<Vec<Var>>,
    /// `inputs[j]`, `j = 0..k`, in input order.
    pub inputs: Vec<Vec<Var>>,
    /// `signals[j][s]`, `j = 0..k`: the variable of signal `s` in frame `j`.
    pub signals: Vec<Vec<Var>>,
}

impl FrameMap {
    pub fn k(&self) -> usize {
        self.inputs.len()
    }

    /// Literals fixing frame `j` to `state`.
    pub fn state_lits(&self, j: usize, state: &[bool]) -> Vec<Lit> {
        self.states[j].iter().zip(state).map(|(v, &b)| v.lit(b)).collect()
    }

    /// Frame and latch index of a state variable.
    pub fn locate_state(&self, v: Var) -> Option<(usize, usize)> {
        self.states
            .iter()
            .enumerate()
            .find_map(|(j, vs)| vs.iter().position(|&x| x == v).map(|i| (j, i)))
    }

    /// Frame and input index of an input variable.
    pub fn locate_input(&self, v: Var) -> Option<(usize, usize)> {
        self.inputs
            .iter()
            .enumerate()
            .find_map(|(j, vs)| vs.iter().position(|&x| x == v).map(|i| (j, i)))
    }

    /// States and inputs of a model, frame by frame. Unassigned bits read 0.
    pub fn extract(&self, m: &Model) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
        let read = |vs: &Vec<Var>| vs.iter().map(|&v| m.value(v).unwrap_or(false)).collect();
        (self.states.iter().map(read).collect(), self.inputs.iter().map(read).collect())
    }
}

/// `F_k = I(S_0) ∧ T(S_0,V_0,S_1) ∧ … ∧ T(S_{k-1},V_{k-1},S_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unrolling {
    /// By default every variable but those of `S_k` is quantified.
    pub formula: QuantifiedCnf,
    pub frames: FrameMap,
    pub defs: Vec<GateDef>,
    /// Indices of the initial-state unit clauses, empty without init.
    pub init_clauses: Vec<usize>,
}

/// Unrolls `n` for `k` transitions. Frame `j+1` latch variables are tied to
/// the frame-`j` next-state signals by buffer clauses.
pub fn unroll(n: &Netlist, k: usize, with_init: bool) -> Result<Unrolling> {
    n.validate()?;
    let size = n.len() as u32;
    let signals: Vec<Vec<Var>> = (0..k as u32)
        .map(|j| (0..size).map(|i| Var::new(j * size + i + 1)).collect())
        .collect();
    let mut states: Vec<Vec<Var>> = signals
        .iter()
        .map(|frame| n.latches().iter().map(|l| frame[l.state.index()]).collect())
        .collect();
    let last = k as u32 * size;
    states.push((0..n.latches().len() as u32).map(|i| Var::new(last + i + 1)).collect());
    let inputs: Vec<Vec<Var>> = signals
        .iter()
        .map(|frame| n.input_signals().iter().map(|s| frame[s.index()]).collect())
        .collect();

    let mut clauses = Vec::new();
    let mut defs = Vec::new();
    let mut init_clauses = Vec::new();
    if with_init {
        for (l, &v) in n.latches().iter().zip(&states[0]) {
            init_clauses.push(clauses.len());
            defs.push(GateDef {
                out: v,
                ins: vec![],
                clauses: clauses.len()..clauses.len() + 1,
            });
            clauses.push(Clause::unit(v.lit(l.init)));
        }
    }
    for (j, frame) in signals.iter().enumerate() {
        for (i, &g) in n.gates().iter().enumerate() {
            let cs = gate_clauses(g, frame[i], |s| frame[s.index()]);
            if cs.is_empty() {
                continue;
            }
            let start = clauses.len();
            clauses.extend(cs);
            defs.push(GateDef {
                out: frame[i],
                ins: g.fanins().iter().map(|s| frame[s.index()]).collect(),
                clauses: start..clauses.len(),
            });
        }
        for (li, &s) in states[j + 1].iter().enumerate() {
            let next = frame[n.next_of(li).index()];
            let start = clauses.len();
            clauses.extend(gate_clauses(Gate::Buf(Signal(0)), s, |_| next));
            defs.push(GateDef {
                out: s,
                ins: vec![next],
                clauses: start..clauses.len(),
            });
        }
    }
    let free: BTreeSet<Var> = states[k].iter().copied().collect();
    let quantified: Vec<Var> = (1..=last + n.latches().len() as u32)
        .map(Var::new)
        .filter(|v| !free.contains(v))
        .collect();
    let formula = QuantifiedCnf::with_partition(clauses, quantified, free)?;
    Ok(Unrolling {
        formula,
        frames: FrameMap {
            states,
            inputs,
            signals,
        },
        defs,
        init_clauses,
    })
}

impl Unrolling {
    pub fn k(&self) -> usize {
        self.frames.k()
    }

    /// Same clauses with `free` as the free set and everything else
    /// quantified.
    pub fn with_free(&self, free: impl IntoIterator<Item = Var>) -> QuantifiedCnf {
        let free: BTreeSet<Var> = free.into_iter().collect();
        let all = self.formula.quantified().iter().chain(self.formula.free().iter());
        let quantified: Vec<Var> = all.copied().filter(|v| !free.contains(v)).collect();
        self.formula
            .repartition(quantified, free)
            .expect("partition covers every variable")
    }

    /// Partition of the symbolic-simulation view: `S_0 ∪ V_0 … V_{k-1}`
    /// free, everything else (including `S_1 … S_k`) quantified.
    pub fn symbsim_view(&self) -> QuantifiedCnf {
        let free: Vec<Var> = self.frames.states[0]
            .iter()
            .chain(self.frames.inputs.iter().flatten())
            .copied()
            .collect();
        self.with_free(free)
    }

    /// Indices of the clauses defining the transitive fanin of `roots`.
    pub fn cone(&self, roots: &[Var]) -> Vec<usize> {
        let mut by_out: HashMap<Var, Vec<usize>> = HashMap::new();
        for (i, d) in self.defs.iter().enumerate() {
            by_out.entry(d.out).or_default().push(i);
        }
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        let mut stack = roots.to_vec();
        let mut keep = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for &d in by_out.get(&v).into_iter().flatten() {
                keep.extend(self.defs[d].clauses.clone());
                stack.extend(self.defs[d].ins.iter().copied());
            }
        }
        keep.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[&[i32]]) -> Vec<Clause> {
        v.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect()
    }

    #[test]
    fn and_gate_gives_the_three_textbook_clauses() {
        let mut n = Netlist::new();
        let a = n.input("x1");
        let b = n.input("x2");
        let c = n.and(a, b);
        n.output("x3", c);
        let e = tseitin_encode(&n);
        assert_eq!(e.formula.clauses(), cls(&[&[-1, -2, 3], &[1, -3], &[2, -3]]).as_slice());
    }

    #[test]
    fn not_gate() {
        let mut n = Netlist::new();
        let a = n.input("x1");
        let b = n.not(a);
        n.output("x2", b);
        assert_eq!(tseitin_encode(&n).formula.clauses(), cls(&[&[1, 2], &[-1, -2]]).as_slice());
    }

    #[test]
    fn frame_maps_are_disjoint() {
        let mut n = Netlist::new();
        let i = n.input("i");
        let s = n.latch("s", false);
        let x = n.xor(i, s);
        n.set_next(s, x);
        let u = unroll(&n, 3, true).unwrap();
        let mut all = BTreeSet::new();
        for v in u.frames.states.iter().flatten().chain(u.frames.inputs.iter().flatten()) {
            assert!(all.insert(*v));
        }
        assert_eq!(u.formula.free().len(), 1);
        assert_eq!(u.init_clauses.len(), 1);
    }

    #[test]
    fn zero_frames_is_initial_state_only() {
        let mut n = Netlist::new();
        let s = n.latch("s", true);
        n.set_next(s, s);
        let u = unroll(&n, 0, true).unwrap();
        assert_eq!(u.formula.clauses(), cls(&[&[1]]).as_slice());
        assert!(u.formula.quantified().is_empty());
    }
}
