use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Clause, Lit, QuantifiedCnf, Var};
use crate::error::{Error, Result};

/// Parses a QDIMACS file with at most one existential block.
///
/// Variables listed on the `e` line are quantified, everything else in the
/// declared range or in some clause is free.
pub fn parse_qdimacs(text: &str) -> Result<QuantifiedCnf> {
    let mut header: Option<(u32, usize)> = None;
    let mut quantified = BTreeSet::new();
    let mut seen_e = false;
    let mut clauses = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut pending_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::syntax(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::syntax(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let nv = parts[1]
                .parse::<u32>()
                .map_err(|_| Error::syntax(line_no, format!("bad variable count `{}`", parts[1])))?;
            let nc = parts[2]
                .parse::<usize>()
                .map_err(|_| Error::syntax(line_no, format!("bad clause count `{}`", parts[2])))?;
            header = Some((nv, nc));
            continue;
        }
        let Some((max_var, _)) = header else {
            return Err(Error::syntax(line_no, "content before problem line"));
        };
        if line.starts_with('a') {
            return Err(Error::UnsupportedQuantifier { line: line_no });
        }
        if let Some(rest) = line.strip_prefix('e') {
            if seen_e {
                return Err(Error::syntax(line_no, "more than one existential block"));
            }
            if !clauses.is_empty() || !pending.is_empty() {
                return Err(Error::syntax(line_no, "quantifier block after clauses"));
            }
            seen_e = true;
            let mut terminated = false;
            for tok in rest.split_whitespace() {
                if terminated {
                    return Err(Error::syntax(line_no, "tokens after terminating 0"));
                }
                let v = parse_int(tok, line_no)?;
                if v == 0 {
                    terminated = true;
                } else if v < 0 || v as u32 > max_var {
                    return Err(Error::syntax(line_no, format!("variable {v} out of range")));
                } else {
                    quantified.insert(Var::new(v as u32));
                }
            }
            if !terminated {
                return Err(Error::syntax(line_no, "quantifier block not terminated by 0"));
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let v = parse_int(tok, line_no)?;
            if pending.is_empty() {
                pending_line = line_no;
            }
            if v == 0 {
                let clause = Clause::from_dimacs(&pending).map_err(|e| match e {
                    Error::Tautology(var) => Error::syntax(
                        pending_line,
                        format!("tautological clause on variable {var}"),
                    ),
                    other => other,
                })?;
                clauses.push(clause);
                pending.clear();
            } else {
                if v.unsigned_abs() > max_var {
                    return Err(Error::syntax(line_no, format!("literal {v} out of range")));
                }
                pending.push(v);
            }
        }
    }

    let Some((max_var, n_clauses)) = header else {
        return Err(Error::syntax(0, "missing problem line"));
    };
    if !pending.is_empty() {
        return Err(Error::syntax(pending_line, "clause not terminated by 0"));
    }
    if clauses.len() != n_clauses {
        return Err(Error::syntax(
            0,
            format!("header declares {n_clauses} clauses, found {}", clauses.len()),
        ));
    }
    let free: BTreeSet<Var> = (1..=max_var)
        .map(Var::new)
        .filter(|v| !quantified.contains(v))
        .collect();
    QuantifiedCnf::with_partition(clauses, quantified, free)
}

/// Parses a plain DIMACS clause list (as written by [`write_dimacs_clauses`]).
pub fn parse_dimacs_clauses(text: &str) -> Result<Vec<Clause>> {
    let f = parse_qdimacs(text)?;
    if !f.quantified().is_empty() {
        return Err(Error::syntax(0, "unexpected quantifier block in clause list"));
    }
    Ok(f.clauses().to_vec())
}

fn parse_int(tok: &str, line: usize) -> Result<i32> {
    tok.parse::<i32>()
        .map_err(|_| Error::syntax(line, format!("malformed literal `{tok}`")))
}

pub fn write_qdimacs(f: &QuantifiedCnf) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.max_var(), f.len());
    if !f.quantified().is_empty() {
        out.push('e');
        for v in f.quantified() {
            let _ = write!(out, " {}", v.index());
        }
        out.push_str(" 0\n");
    }
    for c in f.clauses() {
        let _ = writeln!(out, "{c}");
    }
    out
}

/// Clause list with header `p cnf <maxvar> <nclauses>`.
pub fn write_dimacs_clauses(clauses: &[Clause]) -> String {
    let max_var = clauses
        .iter()
        .flat_map(|c| c.lits().iter().map(|l: &Lit| l.var().index()))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {max_var} {}", clauses.len());
    for c in clauses {
        let _ = writeln!(out, "{c}");
    }
    out
}
