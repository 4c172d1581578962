//! Parametric synchronous FIFO with optional injected bugs.
//!
//! The buffer is a shift register: a write shifts every word one slot up
//! and stores the new word in slot 0, so slot `size - 1` holds the oldest
//! element. A read copies that slot into the `dout` register and shrinks
//! `size`.

use serde::{Deserialize, Serialize};

use super::{Netlist, NetlistMeta, Signal};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Bug {
    #[default]
    None,
    /// Writes of `val` are silently dropped.
    SkipVal,
    /// Writes of `val` store a different constant instead.
    ReplaceVal,
    /// A write of `val` is dropped when the last stored word is `val`.
    ConsecVal,
}

impl std::str::FromStr for Bug {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Bug, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Bug::None),
            "skip_val" | "skip" => Ok(Bug::SkipVal),
            "replace_val" | "replace" => Ok(Bug::ReplaceVal),
            "consec_val" | "consec" => Ok(Bug::ConsecVal),
            _ => Err(format!("unknown bug `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fifo {
    pub netlist: Netlist,
    pub n: usize,
    pub p: usize,
    pub val: u64,
    pub bug: Bug,
    /// `data[i][b]` is the latch index of bit `b` of slot `i`.
    pub data: Vec<Vec<usize>>,
    pub size: Vec<usize>,
    pub dout: Vec<usize>,
}

/// Input order: `wr`, `rd`, then `din` bit 0 upward.
pub fn gen_fifo(n: usize, p: usize, val: u64, bug: Bug) -> Result<Fifo> {
    if n < 2 || !(2..=63).contains(&p) {
        return Err(Error::Parameter(format!("need n >= 2 and 2 <= p <= 63, got n={n}, p={p}")));
    }
    if val == 0 || val >> p != 0 {
        return Err(Error::Parameter(format!("val must be in 1..2^{p}, got {val}")));
    }
    let width = usize::BITS as usize - n.leading_zeros() as usize;
    let mut net = Netlist::new();
    let wr = net.input("wr");
    let rd = net.input("rd");
    let din: Vec<Signal> = (0..p).map(|b| net.input(format!("din[{b}]"))).collect();
    let data: Vec<Vec<Signal>> = (0..n)
        .map(|i| (0..p).map(|b| net.latch(format!("data[{i}][{b}]"), false)).collect())
        .collect();
    let size: Vec<Signal> = (0..width).map(|b| net.latch(format!("size[{b}]"), false)).collect();
    let dout: Vec<Signal> = (0..p).map(|b| net.latch(format!("dout[{b}]"), false)).collect();

    let empty = net.eq_const(&size, 0);
    let full = net.eq_const(&size, n as u64);
    let not_empty = net.not(empty);
    let do_rd = net.and(rd, not_empty);
    let din_is_val = net.eq_const(&din, val);
    let not_full = net.not(full);
    let room = net.or(not_full, do_rd);
    let mut wr_terms = vec![wr, room];
    match bug {
        Bug::None | Bug::ReplaceVal => {}
        Bug::SkipVal => wr_terms.push(net.not(din_is_val)),
        Bug::ConsecVal => {
            let last_is_val = net.eq_const(&data[0], val);
            let both = net.and(din_is_val, last_is_val);
            wr_terms.push(net.not(both));
        }
    }
    let do_wr = net.and_all(&wr_terms);
    let wdata = if bug == Bug::ReplaceVal {
        let other = net.const_word(replacement(val, p), p);
        net.mux_words(din_is_val, &other, &din)
    } else {
        din.clone()
    };

    for i in 0..n {
        let src = if i == 0 { wdata.clone() } else { data[i - 1].clone() };
        let next = net.mux_words(do_wr, &src, &data[i]);
        for (&s, &nx) in data[i].iter().zip(&next) {
            net.set_next(s, nx);
        }
    }

    let mut carry = net.constant(true);
    let mut borrow = carry;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &s in &size {
        plus.push(net.xor(s, carry));
        carry = net.and(s, carry);
        minus.push(net.xor(s, borrow));
        let ns = net.not(s);
        borrow = net.and(ns, borrow);
    }
    let not_rd = net.not(do_rd);
    let not_wr = net.not(do_wr);
    let inc = net.and(do_wr, not_rd);
    let dec = net.and(do_rd, not_wr);
    let after_dec = net.mux_words(dec, &minus, &size);
    let next_size = net.mux_words(inc, &plus, &after_dec);
    for (&s, &nx) in size.iter().zip(&next_size) {
        net.set_next(s, nx);
    }

    let slot_sel: Vec<Signal> = (0..n).map(|i| net.eq_const(&size, i as u64 + 1)).collect();
    for b in 0..p {
        let terms: Vec<Signal> = (0..n).map(|i| net.and(slot_sel[i], data[i][b])).collect();
        let head = net.or_all(&terms);
        let nx = net.mux(do_rd, head, dout[b]);
        net.set_next(dout[b], nx);
        net.output(format!("dout[{b}]"), dout[b]);
    }
    net.output("empty", empty);
    net.output("full", full);

    let idx = |s: Signal| net.latch_index(s).expect("latch");
    let data_idx = data.iter().map(|w| w.iter().map(|&s| idx(s)).collect()).collect();
    let size_idx = size.iter().map(|&s| idx(s)).collect();
    let dout_idx = dout.iter().map(|&s| idx(s)).collect();
    Ok(Fifo {
        n,
        p,
        val,
        bug,
        data: data_idx,
        size: size_idx,
        dout: dout_idx,
        netlist: net,
    })
}

/// The word a REPLACE_VAL FIFO stores in place of `val`.
pub fn replacement(val: u64, p: usize) -> u64 {
    let up = (val + 1) & ((1u64 << p) - 1);
    if up == 0 {
        val - 1
    } else {
        up
    }
}

fn word(state: &[bool], bits: &[usize]) -> u64 {
    bits.iter()
        .enumerate()
        .map(|(b, &i)| (state[i] as u64) << b)
        .sum()
}

impl Fifo {
    /// Latch indices of the data buffer.
    pub fn s_data(&self) -> Vec<usize> {
        self.data.iter().flatten().copied().collect()
    }

    pub fn inputs(&self, wr: bool, rd: bool, din: u64) -> Vec<bool> {
        let mut v = vec![wr, rd];
        v.extend((0..self.p).map(|b| (din >> b) & 1 == 1));
        v
    }

    pub fn slot(&self, state: &[bool], i: usize) -> u64 {
        word(state, &self.data[i])
    }

    pub fn size_of(&self, state: &[bool]) -> u64 {
        word(state, &self.size)
    }

    pub fn dout_of(&self, state: &[bool]) -> u64 {
        word(state, &self.dout)
    }

    pub fn contains_val(&self, state: &[bool]) -> bool {
        (0..self.n).any(|i| self.slot(state, i) == self.val)
    }

    pub fn meta(&self) -> NetlistMeta {
        NetlistMeta {
            s_data: Some(self.s_data()),
            ..self.netlist.meta()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate;

    fn run(f: &Fifo, ops: &[(bool, bool, u64)]) -> Vec<bool> {
        let ins: Vec<Vec<bool>> = ops.iter().map(|&(w, r, d)| f.inputs(w, r, d)).collect();
        simulate(&f.netlist, &ins).last_state().to_vec()
    }

    #[test]
    fn thirty_two_bit_words_give_about_three_hundred_latches() {
        let f = gen_fifo(8, 32, 5, Bug::None).unwrap();
        assert_eq!(f.netlist.latches().len(), 8 * 32 + 4 + 32);
    }

    #[test]
    fn correct_fifo_stores_val_and_returns_in_order() {
        let f = gen_fifo(4, 4, 9, Bug::None).unwrap();
        let s = run(&f, &[(true, false, 9), (true, false, 3)]);
        assert_eq!(f.size_of(&s), 2);
        assert_eq!(f.slot(&s, 1), 9);
        assert_eq!(f.slot(&s, 0), 3);
        let s = run(&f, &[(true, false, 9), (true, false, 3), (false, true, 0)]);
        assert_eq!(f.dout_of(&s), 9);
        assert_eq!(f.size_of(&s), 1);
    }

    #[test]
    fn skip_val_drops_val_only() {
        let f = gen_fifo(4, 4, 9, Bug::SkipVal).unwrap();
        let s = run(&f, &[(true, false, 9)]);
        assert_eq!(f.size_of(&s), 0);
        assert!(!f.contains_val(&s));
        let s = run(&f, &[(true, false, 8)]);
        assert_eq!((f.size_of(&s), f.slot(&s, 0)), (1, 8));
    }

    #[test]
    fn replace_and_consecutive_variants() {
        let f = gen_fifo(4, 4, 9, Bug::ReplaceVal).unwrap();
        let s = run(&f, &[(true, false, 9)]);
        assert_eq!((f.size_of(&s), f.slot(&s, 0)), (1, 10));
        assert_eq!(replacement(15, 4), 14);

        let f = gen_fifo(4, 4, 9, Bug::ConsecVal).unwrap();
        let s = run(&f, &[(true, false, 9), (true, false, 9), (true, false, 1), (true, false, 9)]);
        assert_eq!(f.size_of(&s), 3);
        assert_eq!((f.slot(&s, 0), f.slot(&s, 1), f.slot(&s, 2)), (9, 1, 9));
    }

    #[test]
    fn full_fifo_blocks_writes_unless_reading() {
        let f = gen_fifo(2, 2, 1, Bug::None).unwrap();
        let s = run(&f, &[(true, false, 2), (true, false, 3), (true, false, 1)]);
        assert_eq!(f.size_of(&s), 2);
        assert!(!f.contains_val(&s));
        let s = run(&f, &[(true, false, 2), (true, false, 3), (true, true, 1)]);
        assert_eq!((f.size_of(&s), f.dout_of(&s)), (2, 2));
        assert!(f.contains_val(&s));
    }

    #[test]
    fn parameters_are_checked() {
        assert!(gen_fifo(1, 4, 1, Bug::None).is_err());
        assert!(gen_fifo(4, 4, 0, Bug::None).is_err());
        assert!(gen_fifo(4, 4, 16, Bug::None).is_err());
    }
}
