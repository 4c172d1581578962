//! Problems reduced to partial quantifier elimination: satisfiability,
//! combinational equivalence and interpolation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::{tseitin_encode, Netlist};
use crate::cnf::{Assignment, Clause, QuantifiedCnf, Status, Var};
use crate::error::{Error, Result};
use crate::pqe::{take_out_many, EngineConfig};
use crate::sat::{solve_clauses, SolveOutcome};
use crate::verify::check_implication;

/// Satisfiability of `clauses` by taking the clauses falsified by `x` out
/// of `∃X[F]`. Every variable is quantified, so the solution is either
/// empty (satisfiable) or contains the empty clause.
pub fn sat_by_pqe(clauses: &[Clause], x: &Assignment, cfg: &EngineConfig) -> Result<bool> {
    let vars: BTreeSet<Var> = clauses.iter().flat_map(|c| c.vars()).collect();
    if let Some(v) = vars.iter().find(|v| x.value(**v).is_none()) {
        return Err(Error::precondition(format!("variable {} is unassigned", v.index())));
    }
    let g: Vec<usize> = (0..clauses.len())
        .filter(|&i| clauses[i].evaluate(x) == Status::Falsified)
        .collect();
    if g.is_empty() {
        return Ok(true);
    }
    let f = QuantifiedCnf::new(clauses.to_vec(), vars);
    let sol = take_out_many(&f, &g, cfg)?;
    if !sol.status.is_complete() {
        return Err(Error::Budget(format!("take-out ended {}", sol.status)));
    }
    Ok(!sol.clauses.iter().any(|c| c.is_empty()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqVerdict {
    Equivalent,
    /// Input vector of the first circuit, in input order.
    Inequivalent { cex: Vec<bool> },
    /// The take-out result did not imply `w' ≡ w''`, but the circuits are
    /// the same constant.
    ConstantCase,
}

impl EqVerdict {
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, EqVerdict::Inequivalent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqReport {
    #[serde(flatten)]
    pub verdict: EqVerdict,
    /// Output pair that differs, for inequivalent circuits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<usize>,
    /// Outputs decided by a plain miter because a take-out ran out of budget.
    pub fell_back: Vec<usize>,
}

struct Miter {
    clauses: Vec<Clause>,
    /// Indices of the input-equality clauses.
    eq: Vec<usize>,
    inputs: Vec<Var>,
    outputs: Vec<(Var, Var)>,
    max_var: u32,
}

fn miter(n1: &Netlist, n2: &Netlist) -> Result<Miter> {
    if n1.inputs().len() != n2.inputs().len() || n1.outputs().len() != n2.outputs().len() {
        return Err(Error::precondition("circuits differ in input or output count"));
    }
    if !n1.is_combinational() || !n2.is_combinational() {
        return Err(Error::precondition("equivalence checking needs combinational circuits"));
    }
    let e1 = tseitin_encode(n1);
    let e2 = tseitin_encode(n2);
    let shift = n1.len() as u32;
    let moved = |v: Var| Var::new(v.index() + shift);
    let mut clauses = Vec::new();
    let mut eq = Vec::new();
    for (a, b) in n1.input_signals().into_iter().zip(n2.input_signals()) {
        let (x, y) = (e1.var(a), moved(e2.var(b)));
        eq.push(clauses.len());
        clauses.push(Clause::new([x.pos(), y.neg()])?);
        eq.push(clauses.len());
        clauses.push(Clause::new([x.neg(), y.pos()])?);
    }
    clauses.extend(e1.formula.clauses().iter().cloned());
    for c in e2.formula.clauses() {
        clauses.push(Clause::new(c.lits().iter().map(|l| moved(l.var()).lit(l.is_positive())))?);
    }
    let outputs = n1
        .output_signals()
        .into_iter()
        .zip(n2.output_signals())
        .map(|(a, b)| (e1.var(a), moved(e2.var(b))))
        .collect();
    Ok(Miter {
        clauses,
        eq,
        inputs: n1.input_signals().into_iter().map(|s| e1.var(s)).collect(),
        outputs,
        max_var: shift + n2.len() as u32,
    })
}

/// A distinguishing input for output pair `(w1, w2)`, if any.
fn miter_sat(m: &Miter, extra: &[Clause], w1: Var, w2: Var) -> Result<Option<Vec<bool>>> {
    let mut all: Vec<Clause> = m.clauses.iter().chain(extra).cloned().collect();
    all.push(Clause::new([w1.pos(), w2.pos()])?);
    all.push(Clause::new([w1.neg(), w2.neg()])?);
    match solve_clauses(&all, &[]) {
        SolveOutcome::Sat(model) => Ok(Some(m.inputs.iter().map(|&v| model.value(v).unwrap_or(false)).collect())),
        SolveOutcome::Unsat(_) => Ok(None),
        SolveOutcome::Unknown => Err(Error::Budget("miter query".into())),
    }
}

/// Direct miter check without PQE: a distinguishing input, if any.
pub fn miter_check(n1: &Netlist, n2: &Netlist) -> Result<Option<Vec<bool>>> {
    let m = miter(n1, n2)?;
    for &(w1, w2) in &m.outputs {
        if let Some(cex) = miter_sat(&m, &[], w1, w2)? {
            return Ok(Some(cex));
        }
    }
    Ok(None)
}

/// Equivalence of two combinational circuits, one output pair at a time.
///
/// For each pair the input-equality clauses are taken out of
/// `∃Z[eq ∧ G' ∧ G'']`, leaving `h(w', w'')`. If `h ⊨ w' ≡ w''` the pair is
/// equivalent; otherwise a miter constrained by `h` either yields a
/// counterexample or shows both outputs are the same constant.
pub fn eq_check_pqe(n1: &Netlist, n2: &Netlist, cfg: &EngineConfig) -> Result<EqReport> {
    let m = miter(n1, n2)?;
    let mut report = EqReport {
        verdict: EqVerdict::Equivalent,
        output: None,
        fell_back: Vec::new(),
    };
    for (i, &(w1, w2)) in m.outputs.iter().enumerate() {
        if w1 == w2 {
            continue;
        }
        let free = [w1, w2];
        let quantified = (1..=m.max_var).map(Var::new).filter(|v| !free.contains(v));
        let f = QuantifiedCnf::with_partition(m.clauses.clone(), quantified, free)?;
        let sol = take_out_many(&f, &m.eq, cfg)?;
        if !sol.status.is_complete() {
            report.fell_back.push(i);
            if let Some(cex) = miter_sat(&m, &[], w1, w2)? {
                report.verdict = EqVerdict::Inequivalent { cex };
                report.output = Some(i);
                return Ok(report);
            }
            continue;
        }
        let same = [Clause::new([w1.pos(), w2.neg()])?, Clause::new([w1.neg(), w2.pos()])?];
        let h_eq = check_implication(&sol.clauses, &same, None).ok_or_else(|| Error::Budget("h check".into()))?;
        if h_eq {
            continue;
        }
        match miter_sat(&m, &sol.clauses, w1, w2)? {
            Some(cex) => {
                report.verdict = EqVerdict::Inequivalent { cex };
                report.output = Some(i);
                return Ok(report);
            }
            None => report.verdict = EqVerdict::ConstantCase,
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CraigCheck {
    SharedVariables,
    AImpliesI,
    IAndBUnsat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InterpolationResult {
    Interpolant { clauses: Vec<Clause> },
    NotAnInterpolant { clauses: Vec<Clause>, failed: CraigCheck },
}

/// Takes every clause of `a` out of `∃W[A ∧ B]`, `W` being the variables
/// not shared by `a` and `b`, and checks the result against the three
/// Craig conditions.
///
/// A generalized clause may lean on `b` and so fail `A ⊨ I`. In that case
/// the take-out is repeated with `generalize` off, which only adds
/// negated points at which `B` is satisfiable and therefore `A` is not.
pub fn interpolant_by_pqe(a: &[Clause], b: &[Clause], cfg: &EngineConfig) -> Result<InterpolationResult> {
    let mut all: Vec<Clause> = a.to_vec();
    all.extend(b.iter().cloned());
    if solve_clauses(&all, &[]).is_sat() {
        return Err(Error::precondition("A ∧ B is satisfiable"));
    }
    let va: BTreeSet<Var> = a.iter().flat_map(|c| c.vars()).collect();
    let vb: BTreeSet<Var> = b.iter().flat_map(|c| c.vars()).collect();
    let shared: BTreeSet<Var> = va.intersection(&vb).copied().collect();
    let w: Vec<Var> = va.union(&vb).copied().filter(|v| !shared.contains(v)).collect();
    let f = QuantifiedCnf::with_partition(all, w, shared.iter().copied())?;
    let targets: Vec<usize> = (0..a.len()).collect();
    let res = craig_take_out(&f, a, b, &targets, &shared, cfg)?;
    if cfg.generalize && matches!(res, InterpolationResult::NotAnInterpolant { failed: CraigCheck::AImpliesI, .. }) {
        let plain = EngineConfig {
            generalize: false,
            ..cfg.clone()
        };
        return craig_take_out(&f, a, b, &targets, &shared, &plain);
    }
    Ok(res)
}

fn craig_take_out(
    f: &QuantifiedCnf,
    a: &[Clause],
    b: &[Clause],
    targets: &[usize],
    shared: &BTreeSet<Var>,
    cfg: &EngineConfig,
) -> Result<InterpolationResult> {
    let sol = take_out_many(f, targets, cfg)?;
    if !sol.status.is_complete() {
        return Err(Error::Budget(format!("take-out ended {}", sol.status)));
    }
    let clauses = sol.clauses;
    let fail = |failed| Ok(InterpolationResult::NotAnInterpolant { clauses: clauses.clone(), failed });
    if clauses.iter().any(|c| c.vars().any(|v| !shared.contains(&v))) {
        return fail(CraigCheck::SharedVariables);
    }
    if !check_implication(a, &clauses, None).ok_or_else(|| Error::Budget("A ⊨ I".into()))? {
        return fail(CraigCheck::AImpliesI);
    }
    let mut ib: Vec<Clause> = clauses.clone();
    ib.extend(b.iter().cloned());
    if solve_clauses(&ib, &[]).is_sat() {
        return fail(CraigCheck::IAndBUnsat);
    }
    Ok(InterpolationResult::Interpolant { clauses })
}
