//! Property generation for combinational circuits and unrollings.
//!
//! A property is a set of clauses over unquantified variables implied by
//! the circuit formula, obtained by taking one clause out of it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::circuit::{simulate3v, tseitin_encode, Netlist, Ternary, Unrolling};
use crate::cnf::{Assignment, Clause, Lit, QuantifiedCnf, Var};
use crate::error::{Error, Result};
use crate::pqe::{take_out, EngineConfig, EngineStats, LoopEvent, PqeSolution, SolutionStatus};
use crate::sat::{implies, SatConfig, Session, SolveOutcome};
use crate::verify::prune_redundant;

/// Clauses over the free variables implied by the source formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Property {
    pub clauses: Vec<Clause>,
    /// Clause index the property was taken out of.
    pub target: usize,
    /// Output constraint `B` conjoined to the formula, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<Clause>,
    pub status: SolutionStatus,
    pub stats: EngineStats,
}

/// Takes `target` out of `f` and drops the clauses already implied by the
/// rest of the formula. A free target is its own property.
pub fn generate_property(f: &QuantifiedCnf, target: usize, cfg: &EngineConfig) -> Result<Property> {
    let sol = take_out(f, target, cfg)?;
    let clauses = if f.is_quantified_clause(target)? {
        let rest = f.without_clauses(&[target]);
        prune_redundant(&sol.clauses, rest.clauses())
    } else {
        sol.clauses
    };
    Ok(Property {
        clauses,
        target,
        constraint: None,
        status: sol.status,
        stats: sol.stats,
    })
}

/// Replaces clause `target` by `C ∨ ¬l(v_1)`, …, `C ∨ ¬l(v_p)` and
/// `C ∨ l(v_1) ∨ … ∨ l(v_p)`, where `l(v_i)` is the literal of `v_i` that
/// `v` falsifies. The last clause takes the place of `C`; the others are
/// appended. Returns the new formula and the index of the last clause.
pub fn split_clause(
    f: &QuantifiedCnf,
    target: usize,
    split_vars: &[Var],
    v: &Assignment,
) -> Result<(QuantifiedCnf, usize)> {
    let c = f.clause(target)?.clone();
    let mut ls: Vec<Lit> = Vec::with_capacity(split_vars.len());
    for &x in split_vars {
        if c.literal_of(x).is_some() {
            return Err(Error::precondition(format!("split variable {} occurs in the target", x.index())));
        }
        let b = v
            .value(x)
            .ok_or_else(|| Error::precondition(format!("split variable {} is unassigned", x.index())))?;
        if ls.iter().any(|l| l.var() == x) {
            return Err(Error::precondition(format!("split variable {} repeated", x.index())));
        }
        ls.push(x.lit(!b));
    }
    let mut clauses = f.clauses().to_vec();
    clauses[target] = c.extended(ls.iter().copied())?;
    for &l in &ls {
        clauses.push(c.extended([!l])?);
    }
    let g = QuantifiedCnf::with_partition(clauses, f.quantified().iter().copied(), f.free().iter().copied())?;
    Ok((g, target))
}

/// How a take-out of a fully split clause ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitCase {
    /// The first query was already unsatisfiable.
    TriviallyRedundant,
    /// Only plugging clauses were added.
    Plugged,
    /// A clause was added to the solution.
    SingleTest,
}

pub fn split_case(sol: &PqeSolution) -> SplitCase {
    if sol.events.is_empty() {
        SplitCase::TriviallyRedundant
    } else if sol.events.iter().any(|e| matches!(e, LoopEvent::Added { .. })) {
        SplitCase::SingleTest
    } else {
        SplitCase::Plugged
    }
}

/// `B_v ∨ l(w)`: the longest clause over the inputs falsified by `v`,
/// plus the literal of output `output` that holds when `v` is applied.
/// Variables are those of [`tseitin_encode`].
pub fn single_test_property(m: &Netlist, v: &[bool], output: usize) -> Result<Clause> {
    if v.len() != m.inputs().len() {
        return Err(Error::Parameter(format!(
            "expected {} input values, got {}",
            m.inputs().len(),
            v.len()
        )));
    }
    let (_, w) = *m
        .outputs()
        .get(output)
        .ok_or_else(|| Error::Parameter(format!("no output {output}")))?;
    let enc = tseitin_encode(m);
    let values = crate::circuit::eval(m, &[], v);
    let mut lits: Vec<Lit> = m
        .input_signals()
        .iter()
        .zip(v)
        .map(|(&s, &b)| enc.var(s).lit(!b))
        .collect();
    let wl = enc.var(w).lit(values[w.index()]);
    if lits.iter().any(|l| l.var() == wl.var()) {
        return Err(Error::precondition("output is an input"));
    }
    lits.push(wl);
    Clause::new(lits)
}

/// `F_k ∧ B` restricted to the logic feeding `vars(B)`, with
/// `S_0 ∪ V_0 … V_{k-1}` free. Returns the formula, the index of `B` in
/// it and the map from clause indices of `u.formula`.
fn symbsim_formula(u: &Unrolling, b: &Clause) -> Result<(QuantifiedCnf, usize, BTreeMap<usize, usize>)> {
    let last: BTreeSet<Var> = u.frames.states[u.k()].iter().copied().collect();
    if let Some(v) = b.vars().find(|v| !last.contains(v)) {
        return Err(Error::precondition(format!(
            "constraint variable {} is not a last-frame state variable",
            v.index()
        )));
    }
    let roots: Vec<Var> = b.vars().collect();
    let mut keep: BTreeSet<usize> = u.cone(&roots).into_iter().collect();
    let cone_vars: BTreeSet<Var> = keep.iter().flat_map(|&i| u.formula.clauses()[i].vars()).collect();
    for &i in &u.init_clauses {
        if u.formula.clauses()[i].vars().all(|v| cone_vars.contains(&v)) {
            keep.insert(i);
        }
    }
    let mut clauses = Vec::with_capacity(keep.len() + 1);
    let mut map = BTreeMap::new();
    for i in keep {
        map.insert(i, clauses.len());
        clauses.push(u.formula.clauses()[i].clone());
    }
    let bi = clauses.len();
    clauses.push(b.clone());
    let free: BTreeSet<Var> = u.frames.states[0]
        .iter()
        .chain(u.frames.inputs.iter().flatten())
        .copied()
        .collect();
    let quantified: Vec<Var> = u
        .formula
        .quantified()
        .iter()
        .chain(u.formula.free().iter())
        .copied()
        .filter(|v| !free.contains(v))
        .collect();
    Ok((QuantifiedCnf::with_partition(clauses, quantified, free)?, bi, map))
}

/// Clauses of `u` that [`symbsim_property`] accepts as targets for `b`:
/// clauses with a quantified variable feeding `vars(b)`.
pub fn symbsim_targets(u: &Unrolling, b: &Clause) -> Result<Vec<usize>> {
    let (f, bi, map) = symbsim_formula(u, b)?;
    Ok(map
        .into_iter()
        .filter(|&(_, j)| j != bi && f.is_quantified_clause(j).unwrap_or(false))
        .map(|(i, _)| i)
        .collect())
}

/// Takes clause `target` of `u` out of `∃S_{1,k}[F_k ∧ B]`, keeping only
/// the logic that feeds `vars(B)`. Clauses mention `S_0` and the inputs
/// only. Set `cfg.clause_cap` to stop early.
pub fn symbsim_property(u: &Unrolling, b: &Clause, target: usize, cfg: &EngineConfig) -> Result<Property> {
    u.formula.clause(target)?;
    let (f, _, map) = symbsim_formula(u, b)?;
    let t = *map
        .get(&target)
        .ok_or_else(|| Error::precondition(format!("clause {target} does not feed the constraint")))?;
    let mut p = generate_property(&f, t, cfg)?;
    p.target = target;
    p.constraint = Some(b.clone());
    Ok(p)
}

/// Whether `F_k ∧ B ⊨ q`: every input falsifying `q` drives the last
/// state to falsify `B`.
pub fn verify_symbsim_property(u: &Unrolling, b: &Clause, q: &Clause) -> Result<bool> {
    let mut clauses = u.formula.clauses().to_vec();
    clauses.push(b.clone());
    implies(&clauses, q, None).ok_or_else(|| Error::Budget("property check".into()))
}

/// Three-valued run with the inputs of `q` set to falsify it and every
/// other input unknown, from the initial state. True iff a latch of
/// `vars(b)` ends up unknown, i.e. the property is out of reach of
/// three-valued simulation.
pub fn beats_ternary_sim(n: &Netlist, u: &Unrolling, q: &Clause, b: &Clause) -> bool {
    let mut inputs = vec![vec![Ternary::X; n.inputs().len()]; u.k()];
    for l in q.lits() {
        if let Some((j, i)) = u.frames.locate_input(l.var()) {
            inputs[j][i] = Ternary::from(!l.is_positive());
        }
    }
    let t = simulate3v(n, &inputs);
    let last = &t.states[u.k()];
    b.vars().any(|v| {
        u.frames.states[u.k()]
            .iter()
            .position(|&x| x == v)
            .is_some_and(|i| !last[i].is_known())
    })
}

/// Result of [`bug_exposing_tests`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BugTests {
    /// Clauses whose removal alone breaks `F ⊨ q`.
    pub removed: Vec<usize>,
    /// Input parts of models of `F' ∧ ¬q`. Empty means inconclusive.
    pub tests: Vec<Assignment>,
}

/// Drops from `f` every candidate clause `B` with `F \ {B} ⊭ q` and
/// enumerates up to `max_tests` distinct input assignments (over
/// `inputs`) of models of the reduced formula falsifying `q`.
///
/// `candidates` defaults to every clause.
pub fn bug_exposing_tests(
    f: &[Clause],
    q: &Clause,
    candidates: Option<&[usize]>,
    inputs: &[Var],
    max_tests: usize,
) -> Result<BugTests> {
    if !implies(f, q, None).ok_or_else(|| Error::Budget("implication check".into()))? {
        return Err(Error::precondition("the formula does not imply the property"));
    }
    let mut s = Session::new(SatConfig::default());
    let top = f.iter().flat_map(|c| c.vars()).chain(q.vars()).map(|v| v.index()).max().unwrap_or(0);
    let acts: Vec<Lit> = (0..f.len()).map(|i| Var::new(top + 1 + i as u32).pos()).collect();
    for (c, &a) in f.iter().zip(&acts) {
        let mut lits = c.lits().to_vec();
        lits.push(!a);
        s.add_lits(&lits);
    }
    let not_q: Vec<Lit> = q.lits().iter().map(|&l| !l).collect();
    let all: Vec<usize> = (0..f.len()).collect();
    let mut removed = Vec::new();
    for &i in candidates.unwrap_or(&all) {
        if i >= f.len() {
            return Err(Error::ClauseIndex(i));
        }
        let mut assumptions: Vec<Lit> = acts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
        assumptions.extend(&not_q);
        match s.solve(&assumptions) {
            SolveOutcome::Sat(_) => removed.push(i),
            SolveOutcome::Unsat(_) => {}
            SolveOutcome::Unknown => return Err(Error::Budget("removal check".into())),
        }
    }
    let mut assumptions: Vec<Lit> = acts
        .iter()
        .enumerate()
        .filter(|(j, _)| !removed.contains(j))
        .map(|(_, &a)| a)
        .collect();
    assumptions.extend(&not_q);
    let mut tests = Vec::new();
    while tests.len() < max_tests {
        match s.solve(&assumptions) {
            SolveOutcome::Sat(m) => {
                let t: Assignment = inputs.iter().map(|&v| (v, m.value(v).unwrap_or(false))).collect();
                if t.is_empty() {
                    tests.push(t);
                    break;
                }
                s.add_clause(&t.blocking_clause());
                tests.push(t);
            }
            SolveOutcome::Unsat(_) => break,
            SolveOutcome::Unknown => return Err(Error::Budget("test enumeration".into())),
        }
    }
    Ok(BugTests { removed, tests })
}
