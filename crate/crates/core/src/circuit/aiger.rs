//! ASCII AIGER (`aag`) reader and writer.
//!
//! Only the header counts `M I L O A` are supported; bad-state, constraint,
//! justice and fairness sections are rejected. Every latch must have a
//! constant reset value.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Gate, Netlist, Signal};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::syntax(line, msg)
}

fn numbers(line: usize, text: &str, want: std::ops::RangeInclusive<usize>) -> Result<Vec<u32>> {
    let v: Vec<u32> = text
        .split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| err(line, format!("bad number `{t}`"))))
        .collect::<Result<_>>()?;
    if !want.contains(&v.len()) {
        return Err(err(line, format!("expected {want:?} numbers, found {}", v.len())));
    }
    Ok(v)
}

struct Builder {
    net: Netlist,
    /// Signal of each AIGER variable's positive literal.
    var_sig: HashMap<u32, Signal>,
    negated: HashMap<u32, Signal>,
    consts: [Option<Signal>; 2],
    ands: HashMap<u32, (u32, u32, usize)>,
    visiting: Vec<bool>,
}

impl Builder {
    fn lit(&mut self, lit: u32, line: usize) -> Result<Signal> {
        if lit < 2 {
            let b = lit == 1;
            return Ok(*self.consts[lit as usize].get_or_insert_with(|| self.net.constant(b)));
        }
        let var = lit / 2;
        let pos = match self.var_sig.get(&var) {
            Some(&s) => s,
            None => self.and(var, line)?,
        };
        if lit % 2 == 0 {
            return Ok(pos);
        }
        if let Some(&s) = self.negated.get(&var) {
            return Ok(s);
        }
        let s = self.net.not(pos);
        self.negated.insert(var, s);
        Ok(s)
    }

    fn and(&mut self, var: u32, line: usize) -> Result<Signal> {
        let &(a, b, at) = self
            .ands
            .get(&var)
            .ok_or_else(|| err(line, format!("literal {} is never defined", var * 2)))?;
        if std::mem::replace(&mut self.visiting[var as usize], true) {
            return Err(err(at, "combinational cycle"));
        }
        let sa = self.lit(a, at)?;
        let sb = self.lit(b, at)?;
        let s = self.net.and(sa, sb);
        self.var_sig.insert(var, s);
        Ok(s)
    }
}

pub fn parse_aag(text: &str) -> Result<Netlist> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("aag") {
        return Err(err(hl, "expected `aag` header"));
    }
    let counts = numbers(hl, &parts.collect::<Vec<_>>().join(" "), 5..=5)
        .map_err(|_| err(hl, "header must be `aag M I L O A` without extra sections"))?;
    let (m, ni, nl, no, na) = (counts[0], counts[1], counts[2], counts[3], counts[4]);
    if ni + nl + na > m {
        return Err(err(hl, "M is smaller than I + L + A"));
    }
    let mut next_line = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("unexpected end of file reading {what}")))
    };

    let mut b = Builder {
        net: Netlist::new(),
        var_sig: HashMap::new(),
        negated: HashMap::new(),
        consts: [None, None],
        ands: HashMap::new(),
        visiting: vec![false; m as usize + 1],
    };
    let check_def = |l: usize, lit: u32, b: &Builder| -> Result<()> {
        if lit < 2 || lit % 2 == 1 || lit / 2 > m {
            return Err(err(l, format!("`{lit}` cannot be defined here")));
        }
        if b.var_sig.contains_key(&(lit / 2)) || b.ands.contains_key(&(lit / 2)) {
            return Err(err(l, format!("variable {} defined twice", lit / 2)));
        }
        Ok(())
    };

    for i in 0..ni {
        let (l, t) = next_line("inputs")?;
        let v = numbers(l, t, 1..=1)?;
        check_def(l, v[0], &b)?;
        let s = b.net.input(format!("i{i}"));
        b.var_sig.insert(v[0] / 2, s);
    }
    let mut latch_defs = Vec::new();
    for i in 0..nl {
        let (l, t) = next_line("latches")?;
        let v = numbers(l, t, 2..=3)?;
        check_def(l, v[0], &b)?;
        let init = match v.get(2) {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => return Err(err(l, "latch without a constant reset value")),
        };
        let s = b.net.latch(format!("l{i}"), init);
        b.var_sig.insert(v[0] / 2, s);
        latch_defs.push((l, s, v[1]));
    }
    let mut outputs = Vec::new();
    for _ in 0..no {
        let (l, t) = next_line("outputs")?;
        let v = numbers(l, t, 1..=1)?;
        outputs.push((l, v[0]));
    }
    let mut and_order = Vec::new();
    for _ in 0..na {
        let (l, t) = next_line("and gates")?;
        let v = numbers(l, t, 3..=3)?;
        check_def(l, v[0], &b)?;
        b.ands.insert(v[0] / 2, (v[1], v[2], l));
        and_order.push((l, v[0]));
    }
    for (l, lhs) in and_order {
        if !b.var_sig.contains_key(&(lhs / 2)) {
            b.and(lhs / 2, l)?;
        }
    }
    for (l, s, next) in latch_defs {
        let n = b.lit(next, l)?;
        b.net.set_next(s, n);
    }
    for (i, (l, lit)) in outputs.into_iter().enumerate() {
        let s = b.lit(lit, l)?;
        b.net.output(format!("o{i}"), s);
    }

    let mut net = b.net;
    for (l, t) in lines {
        if t.starts_with('c') {
            break;
        }
        if t.is_empty() {
            continue;
        }
        let (tag, name) = t
            .split_once(' ')
            .ok_or_else(|| err(l, "symbol lines are `<i|l|o><pos> <name>`"))?;
        let kind = tag.as_bytes()[0];
        let pos: usize = tag[1..]
            .parse()
            .map_err(|_| err(l, format!("bad symbol position `{tag}`")))?;
        let slot = match kind {
            b'i' => net.inputs.get_mut(pos).map(|x| &mut x.0),
            b'l' => net.latches.get_mut(pos).map(|x| &mut x.name),
            b'o' => net.outputs.get_mut(pos).map(|x| &mut x.0),
            _ => return Err(err(l, format!("unsupported section `{}`", kind as char))),
        };
        *slot.ok_or_else(|| err(l, format!("symbol `{tag}` out of range")))? = name.to_string();
    }
    Ok(net)
}

/// Writes the netlist as an and-inverter graph. OR, XOR and MUX gates are
/// expanded into ANDs.
pub fn write_aag(n: &Netlist) -> Result<String> {
    n.validate()?;
    let ni = n.inputs().len() as u32;
    let nl = n.latches().len() as u32;
    let mut lit = vec![0u32; n.len()];
    for (i, (_, s)) in n.inputs().iter().enumerate() {
        lit[s.index()] = 2 * (i as u32 + 1);
    }
    for (i, l) in n.latches().iter().enumerate() {
        lit[l.state.index()] = 2 * (ni + i as u32 + 1);
    }
    let mut ands: Vec<(u32, u32, u32)> = Vec::new();
    let mut next_var = ni + nl + 1;
    let mut and = |a: u32, b: u32| {
        let out = 2 * next_var;
        next_var += 1;
        ands.push((out, a.max(b), a.min(b)));
        out
    };
    for (i, g) in n.gates().iter().enumerate() {
        lit[i] = match *g {
            Gate::Input | Gate::Latch => lit[i],
            Gate::Const(b) => b as u32,
            Gate::Buf(a) => lit[a.index()],
            Gate::Not(a) => lit[a.index()] ^ 1,
            Gate::And(a, b) => and(lit[a.index()], lit[b.index()]),
            Gate::Or(a, b) => and(lit[a.index()] ^ 1, lit[b.index()] ^ 1) ^ 1,
            Gate::Xor(a, b) => {
                let (x, y) = (lit[a.index()], lit[b.index()]);
                let p = and(x, y ^ 1);
                let q = and(x ^ 1, y);
                and(p ^ 1, q ^ 1) ^ 1
            }
            Gate::Mux { sel, hi, lo } => {
                let s = lit[sel.index()];
                let p = and(s, lit[hi.index()]);
                let q = and(s ^ 1, lit[lo.index()]);
                and(p ^ 1, q ^ 1) ^ 1
            }
        };
    }
    let mut out = String::new();
    let m = ni + nl + ands.len() as u32;
    writeln!(out, "aag {m} {ni} {nl} {} {}", n.outputs().len(), ands.len()).unwrap();
    for i in 0..ni {
        writeln!(out, "{}", 2 * (i + 1)).unwrap();
    }
    for (i, l) in n.latches().iter().enumerate() {
        let next = lit[l.next.expect("validated").index()];
        writeln!(out, "{} {next} {}", 2 * (ni + i as u32 + 1), l.init as u32).unwrap();
    }
    for (_, s) in n.outputs() {
        writeln!(out, "{}", lit[s.index()]).unwrap();
    }
    for (o, a, b) in &ands {
        writeln!(out, "{o} {a} {b}").unwrap();
    }
    for (i, (name, _)) in n.inputs().iter().enumerate() {
        writeln!(out, "i{i} {name}").unwrap();
    }
    for (i, l) in n.latches().iter().enumerate() {
        writeln!(out, "l{i} {}", l.name).unwrap();
    }
    for (i, (name, _)) in n.outputs().iter().enumerate() {
        writeln!(out, "o{i} {name}").unwrap();
    }
    Ok(out)
}
