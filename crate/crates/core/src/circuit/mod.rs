//! Gate-level netlists: construction, AIGER exchange, CNF encoding,
//! unrolling and simulation.

mod aiger;
mod fifo;
mod random;
mod sim;
mod tseitin;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use aiger::{parse_aag, write_aag};
pub use fifo::{gen_fifo, replacement, Bug, Fifo};
pub use random::{random_combinational, random_sequential};
pub use sim::{eval, eval3, simulate, simulate3v, simulate_from, Ternary, TernaryTrace, Trace};
pub use tseitin::{tseitin_encode, unroll, Encoding, FrameMap, GateDef, Unrolling};
pub(crate) use tseitin::frame_clauses;

/// Node id in a [`Netlist`]. Ids are dense and every gate only refers to
/// smaller ids, which keeps the combinational core acyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signal(pub u32);

impl Signal {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    Input,
    /// Current-state output of a latch.
    Latch,
    Const(bool),
    Buf(Signal),
    Not(Signal),
    And(Signal, Signal),
    Or(Signal, Signal),
    Xor(Signal, Signal),
    Mux { sel: Signal, hi: Signal, lo: Signal },
}

impl Gate {
    pub fn fanins(&self) -> Vec<Signal> {
        match *self {
            Gate::Input | Gate::Latch | Gate::Const(_) => vec![],
            Gate::Buf(a) | Gate::Not(a) => vec![a],
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => vec![a, b],
            Gate::Mux { sel, hi, lo } => vec![sel, hi, lo],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Latch {
    pub state: Signal,
    pub next: Option<Signal>,
    pub init: bool,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Netlist {
    gates: Vec<Gate>,
    inputs: Vec<(String, Signal)>,
    latches: Vec<Latch>,
    outputs: Vec<(String, Signal)>,
}

/// Names and roles of the state and I/O of a netlist, for JSON sidecars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetlistMeta {
    pub inputs: Vec<String>,
    pub latches: Vec<String>,
    pub outputs: Vec<String>,
    pub gates: usize,
    /// Latch indices of the FIFO data buffer, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_data: Option<Vec<usize>>,
}

impl Netlist {
    pub fn new() -> Netlist {
        Netlist::default()
    }

    fn push(&mut self, g: Gate) -> Signal {
        for s in g.fanins() {
            assert!(s.index() < self.gates.len(), "fanin {s:?} does not exist yet");
        }
        self.gates.push(g);
        Signal(self.gates.len() as u32 - 1)
    }

    pub fn input(&mut self, name: impl Into<String>) -> Signal {
        let s = self.push(Gate::Input);
        self.inputs.push((name.into(), s));
        s
    }

    /// Adds a latch whose next-state function is set later with
    /// [`Netlist::set_next`].
    pub fn latch(&mut self, name: impl Into<String>, init: bool) -> Signal {
        let s = self.push(Gate::Latch);
        self.latches.push(Latch {
            state: s,
            next: None,
            init,
            name: name.into(),
        });
        s
    }

    pub fn set_next(&mut self, latch: Signal, next: Signal) {
        assert!(next.index() < self.gates.len());
        let l = self
            .latches
            .iter_mut()
            .find(|l| l.state == latch)
            .expect("signal is a latch");
        l.next = Some(next);
    }

    pub fn output(&mut self, name: impl Into<String>, s: Signal) {
        assert!(s.index() < self.gates.len());
        self.outputs.push((name.into(), s));
    }

    pub fn constant(&mut self, b: bool) -> Signal {
        self.push(Gate::Const(b))
    }

    pub fn buf(&mut self, a: Signal) -> Signal {
        self.push(Gate::Buf(a))
    }

    pub fn not(&mut self, a: Signal) -> Signal {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, a: Signal, b: Signal) -> Signal {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: Signal, b: Signal) -> Signal {
        self.push(Gate::Or(a, b))
    }

    pub fn xor(&mut self, a: Signal, b: Signal) -> Signal {
        self.push(Gate::Xor(a, b))
    }

    pub fn mux(&mut self, sel: Signal, hi: Signal, lo: Signal) -> Signal {
        self.push(Gate::Mux { sel, hi, lo })
    }

    /// Balanced AND tree; constant true for no operands.
    pub fn and_all(&mut self, xs: &[Signal]) -> Signal {
        match xs {
            [] => self.constant(true),
            [a] => *a,
            _ => {
                let (l, r) = xs.split_at(xs.len() / 2);
                let (a, b) = (self.and_all(l), self.and_all(r));
                self.and(a, b)
            }
        }
    }

    pub fn or_all(&mut self, xs: &[Signal]) -> Signal {
        match xs {
            [] => self.constant(false),
            [a] => *a,
            _ => {
                let (l, r) = xs.split_at(xs.len() / 2);
                let (a, b) = (self.or_all(l), self.or_all(r));
                self.or(a, b)
            }
        }
    }

    /// `word == value`, bit 0 least significant.
    pub fn eq_const(&mut self, word: &[Signal], value: u64) -> Signal {
        let bits: Vec<Signal> = word
            .iter()
            .enumerate()
            .map(|(i, &s)| if (value >> i) & 1 == 1 { s } else { self.not(s) })
            .collect();
        self.and_all(&bits)
    }

    pub fn eq_words(&mut self, a: &[Signal], b: &[Signal]) -> Signal {
        let bits: Vec<Signal> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = self.xor(x, y);
                self.not(d)
            })
            .collect();
        self.and_all(&bits)
    }

    pub fn mux_words(&mut self, sel: Signal, hi: &[Signal], lo: &[Signal]) -> Vec<Signal> {
        hi.iter().zip(lo).map(|(&h, &l)| self.mux(sel, h, l)).collect()
    }

    pub fn const_word(&mut self, value: u64, width: usize) -> Vec<Signal> {
        (0..width).map(|i| self.constant((value >> i) & 1 == 1)).collect()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, s: Signal) -> Gate {
        self.gates[s.index()]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inputs(&self) -> &[(String, Signal)] {
        &self.inputs
    }

    pub fn input_signals(&self) -> Vec<Signal> {
        self.inputs.iter().map(|(_, s)| *s).collect()
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn outputs(&self) -> &[(String, Signal)] {
        &self.outputs
    }

    pub fn output_signals(&self) -> Vec<Signal> {
        self.outputs.iter().map(|(_, s)| *s).collect()
    }

    pub fn initial_state(&self) -> Vec<bool> {
        self.latches.iter().map(|l| l.init).collect()
    }

    /// Latch index of a state signal.
    pub fn latch_index(&self, s: Signal) -> Option<usize> {
        self.latches.iter().position(|l| l.state == s)
    }

    pub fn input_index(&self, s: Signal) -> Option<usize> {
        self.inputs.iter().position(|(_, x)| *x == s)
    }

    pub fn next_of(&self, latch: usize) -> Signal {
        self.latches[latch].next.expect("validated netlist")
    }

    /// Number of logic gates (everything but inputs, latches and constants).
    pub fn gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| !matches!(g, Gate::Input | Gate::Latch | Gate::Const(_)))
            .count()
    }

    pub fn is_combinational(&self) -> bool {
        self.latches.is_empty()
    }

    /// Checks that every latch has a next-state function.
    pub fn validate(&self) -> Result<()> {
        for l in &self.latches {
            if l.next.is_none() {
                return Err(Error::Circuit(format!("latch `{}` has no next-state function", l.name)));
            }
        }
        Ok(())
    }

    /// Signals in the transitive fanin of `roots`, through latches as well
    /// when `through_latches` is set.
    pub fn cone(&self, roots: &[Signal], through_latches: bool) -> Vec<bool> {
        let mut seen = vec![false; self.gates.len()];
        let mut stack: Vec<Signal> = roots.to_vec();
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s.index()], true) {
                continue;
            }
            stack.extend(self.gate(s).fanins());
            if through_latches && self.gate(s) == Gate::Latch {
                if let Some(i) = self.latch_index(s) {
                    stack.extend(self.latches[i].next);
                }
            }
        }
        seen
    }

    /// Adds a fresh input `stutter`; when it is 1 every latch keeps its value.
    /// Returns the new input signal.
    pub fn add_stutter(&mut self) -> Signal {
        let st = self.input("stutter");
        for i in 0..self.latches.len() {
            let l = &self.latches[i];
            let (state, next) = (l.state, l.next.expect("validated netlist"));
            let m = self.mux(st, state, next);
            self.latches[i].next = Some(m);
        }
        st
    }

    pub fn meta(&self) -> NetlistMeta {
        NetlistMeta {
            inputs: self.inputs.iter().map(|(n, _)| n.clone()).collect(),
            latches: self.latches.iter().map(|l| l.name.clone()).collect(),
            outputs: self.outputs.iter().map(|(n, _)| n.clone()).collect(),
            gates: self.gate_count(),
            s_data: None,
        }
    }
}
