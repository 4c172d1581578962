use serde::{Deserialize, Serialize};

use super::{Gate, Netlist};

/// Node values of one combinational evaluation. `state` and `inputs` are in
/// latch and input order.
pub fn eval(n: &Netlist, state: &[bool], inputs: &[bool]) -> Vec<bool> {
    assert_eq!(state.len(), n.latches().len());
    assert_eq!(inputs.len(), n.inputs().len());
    let mut v = vec![false; n.len()];
    for (l, &b) in n.latches().iter().zip(state) {
        v[l.state.index()] = b;
    }
    for ((_, s), &b) in n.inputs().iter().zip(inputs) {
        v[s.index()] = b;
    }
    for (i, g) in n.gates().iter().enumerate() {
        v[i] = match *g {
            Gate::Input | Gate::Latch => v[i],
            Gate::Const(b) => b,
            Gate::Buf(a) => v[a.index()],
            Gate::Not(a) => !v[a.index()],
            Gate::And(a, b) => v[a.index()] && v[b.index()],
            Gate::Or(a, b) => v[a.index()] || v[b.index()],
            Gate::Xor(a, b) => v[a.index()] != v[b.index()],
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

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    /// `states[j]` is the state at frame `j`; one more entry than inputs.
    pub states: Vec<Vec<bool>>,
    pub outputs: Vec<Vec<bool>>,
}

impl Trace {
    pub fn last_state(&self) -> &[bool] {
        self.states.last().expect("trace has an initial state")
    }
}

/// Runs the netlist from its initial state under one input vector per frame.
pub fn simulate(n: &Netlist, inputs: &[Vec<bool>]) -> Trace {
    simulate_from(n, &n.initial_state(), inputs)
}

pub fn simulate_from(n: &Netlist, state: &[bool], inputs: &[Vec<bool>]) -> Trace {
    let mut states = vec![state.to_vec()];
    let mut outputs = Vec::new();
    for inp in inputs {
        let v = eval(n, states.last().unwrap(), inp);
        outputs.push(n.outputs().iter().map(|(_, s)| v[s.index()]).collect());
        states.push((0..n.latches().len()).map(|i| v[n.next_of(i).index()]).collect());
    }
    Trace { states, outputs }
}

/// Three-valued logic value; `X` is the don't-care below both constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ternary {
    Zero,
    One,
    X,
}

impl From<bool> for Ternary {
    fn from(b: bool) -> Ternary {
        if b {
            Ternary::One
        } else {
            Ternary::Zero
        }
    }
}

impl Ternary {
    pub fn to_bool(self) -> Option<bool> {
        match self {
            Ternary::Zero => Some(false),
            Ternary::One => Some(true),
            Ternary::X => None,
        }
    }

    pub fn is_known(self) -> bool {
        self != Ternary::X
    }

    /// Lattice order: `X` refines to anything, constants only to themselves.
    pub fn refines_to(self, other: Ternary) -> bool {
        self == Ternary::X || self == other
    }

    pub fn not(self) -> Ternary {
        match self {
            Ternary::Zero => Ternary::One,
            Ternary::One => Ternary::Zero,
            Ternary::X => Ternary::X,
        }
    }

    pub fn and(self, o: Ternary) -> Ternary {
        match (self, o) {
            (Ternary::Zero, _) | (_, Ternary::Zero) => Ternary::Zero,
            (Ternary::One, Ternary::One) => Ternary::One,
            _ => Ternary::X,
        }
    }

    pub fn or(self, o: Ternary) -> Ternary {
        self.not().and(o.not()).not()
    }

    pub fn xor(self, o: Ternary) -> Ternary {
        match (self.to_bool(), o.to_bool()) {
            (Some(a), Some(b)) => (a != b).into(),
            _ => Ternary::X,
        }
    }

    pub fn mux(sel: Ternary, hi: Ternary, lo: Ternary) -> Ternary {
        match sel {
            Ternary::One => hi,
            Ternary::Zero => lo,
            Ternary::X if hi == lo => hi,
            Ternary::X => Ternary::X,
        }
    }
}

pub fn eval3(n: &Netlist, state: &[Ternary], inputs: &[Ternary]) -> Vec<Ternary> {
    assert_eq!(state.len(), n.latches().len());
    assert_eq!(inputs.len(), n.inputs().len());
    let mut v = vec![Ternary::X; n.len()];
    for (l, &b) in n.latches().iter().zip(state) {
        v[l.state.index()] = b;
    }
    for ((_, s), &b) in n.inputs().iter().zip(inputs) {
        v[s.index()] = b;
    }
    for (i, g) in n.gates().iter().enumerate() {
        v[i] = match *g {
            Gate::Input | Gate::Latch => v[i],
            Gate::Const(b) => b.into(),
            Gate::Buf(a) => v[a.index()],
            Gate::Not(a) => v[a.index()].not(),
            Gate::And(a, b) => v[a.index()].and(v[b.index()]),
            Gate::Or(a, b) => v[a.index()].or(v[b.index()]),
            Gate::Xor(a, b) => v[a.index()].xor(v[b.index()]),
            Gate::Mux { sel, hi, lo } => Ternary::mux(v[sel.index()], v[hi.index()], v[lo.index()]),
        };
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryTrace {
    pub states: Vec<Vec<Ternary>>,
    pub outputs: Vec<Vec<Ternary>>,
}

/// Three-valued run from the initial state.
pub fn simulate3v(n: &Netlist, inputs: &[Vec<Ternary>]) -> TernaryTrace {
    let mut states: Vec<Vec<Ternary>> = vec![n.initial_state().into_iter().map(Ternary::from).collect()];
    let mut outputs = Vec::new();
    for inp in inputs {
        let v = eval3(n, states.last().unwrap(), inp);
        outputs.push(n.outputs().iter().map(|(_, s)| v[s.index()]).collect());
        states.push((0..n.latches().len()).map(|i| v[n.next_of(i).index()]).collect());
    }
    TernaryTrace { states, outputs }
}
