//! D-sequents and the single-clause redundancy prover.
//!
//! A [`DSequent`] `(p, C, E)` states: every total assignment extending `p`
//! that satisfies `F \ {C}` can be turned into a model of `F` by changing
//! only variables of `E`. With `E = ∅` this is the strong form (no model of
//! `F \ {C}` inside `p` falsifies `C`); blocked clauses give the weak form
//! with `E = {w}`. When `p` binds only free variables and `E ⊆ X`, the
//! clause is redundant in `∃X[F]` in every full subspace extending `p`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{resolvable_on, Assignment, Clause, Lit, QuantifiedCnf, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DSequent {
    pub subspace: Assignment,
    pub target: usize,
    /// Variables a witness may need to flip. Empty for strong D-sequents.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub exclusion: BTreeSet<Var>,
}

impl DSequent {
    pub fn strong(subspace: Assignment, target: usize) -> DSequent {
        DSequent {
            subspace,
            target,
            exclusion: BTreeSet::new(),
        }
    }

    /// The clause falsified exactly by the subspace.
    pub fn plugging_clause(&self) -> Clause {
        self.subspace.blocking_clause()
    }
}

/// Merges D-sequents derived in the two branches on `w`.
pub fn join_dsequents(d1: &DSequent, d2: &DSequent, w: Var) -> Result<DSequent> {
    if d1.target != d2.target {
        return Err(Error::precondition("D-sequents have different targets"));
    }
    match (d1.subspace.value(w), d2.subspace.value(w)) {
        (Some(a), Some(b)) if a != b => {}
        _ => {
            return Err(Error::precondition(format!(
                "D-sequents do not assign {w} opposite values"
            )))
        }
    }
    for (v, b) in d1.subspace.iter() {
        if v != w && d2.subspace.value(v) == Some(!b) {
            return Err(Error::precondition(format!(
                "D-sequents also clash on {v}"
            )));
        }
    }
    if d1.exclusion.contains(&w) || d2.exclusion.contains(&w) {
        return Err(Error::precondition(format!(
            "{w} is in an exclusion set"
        )));
    }
    let mut subspace = d1.subspace.union(&d2.subspace.restrict(|v| v != w))?;
    subspace.remove(w);
    Ok(DSequent {
        subspace,
        target: d1.target,
        exclusion: d1.exclusion.union(&d2.exclusion).copied().collect(),
    })
}

/// Tries the three atomic rules at the branch given by `trail`, an ordered
/// list of true literals (earlier entries were assigned first).
///
/// Rules are tried in the order satisfied, conflict, blocked. `None` means
/// no rule applies.
pub fn atomic_dsequent(f: &QuantifiedCnf, target: usize, trail: &[Lit]) -> Result<Option<DSequent>> {
    let c = f.clause(target)?;
    let q = Assignment::from_lits(trail.iter().copied())?;
    let pos: BTreeMap<Var, usize> = trail.iter().enumerate().map(|(i, l)| (l.var(), i)).collect();

    let earliest_true = |cl: &Clause| -> Option<Lit> {
        cl.lits()
            .iter()
            .copied()
            .filter(|&l| q.lit_value(l) == Some(true))
            .min_by_key(|l| pos[&l.var()])
    };

    if let Some(l) = earliest_true(c) {
        return Ok(Some(DSequent::strong(
            Assignment::from_lits([l]).expect("single literal"),
            target,
        )));
    }
    for (j, d) in f.clauses().iter().enumerate() {
        if j != target && d.lits().iter().all(|&l| q.lit_value(l) == Some(false)) {
            return Ok(Some(DSequent::strong(d.falsifying_assignment(), target)));
        }
    }
    for &lit in c.lits() {
        let w = lit.var();
        if !f.is_quantified(w) || q.value(w).is_some() {
            continue;
        }
        let mut subspace = Assignment::new();
        let mut blocked = true;
        for (j, d) in f.clauses().iter().enumerate() {
            if j == target || !d.contains(!lit) || resolvable_on(c, d) != Some(w) {
                continue;
            }
            match earliest_true(d) {
                Some(l) => {
                    subspace.insert(l.var(), l.is_positive());
                }
                None => {
                    blocked = false;
                    break;
                }
            }
        }
        if blocked {
            return Ok(Some(DSequent {
                subspace,
                target,
                exclusion: BTreeSet::from([w]),
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverFailure {
    #[error("decision budget of {0} exhausted")]
    Budget(u64),
    #[error("search reached a model of F \\ {{C}} falsifying C")]
    Incomplete,
    #[error(transparent)]
    Invalid(#[from] Error),
}

enum NodeResult {
    Red(BTreeMap<usize, Lit>, BTreeSet<Var>),
    NonRed,
    Budget,
}

/// Branching prover for redundancy of one clause in subspaces of `Y`.
///
/// Built once per formula and target; clauses over free variables only may
/// be appended to the formula later without invalidating results.
#[derive(Debug, Clone)]
pub struct ClauseProver {
    clauses: Vec<Clause>,
    target: usize,
    order: Vec<Var>,
    occurs: Vec<Vec<usize>>,
    quantified: Vec<bool>,
    // search state
    value: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail_pos: Vec<usize>,
    trail: Vec<Lit>,
    qhead: usize,
    decisions: u64,
    budget: u64,
}

impl ClauseProver {
    pub fn new(f: &QuantifiedCnf, target: usize, budget: u64) -> Result<ClauseProver> {
        let c = f.clause(target)?.clone();
        let n = f.max_var() as usize + 1;
        let mut occurs = vec![Vec::new(); 2 * n];
        let mut in_formula = vec![false; n];
        for (j, d) in f.clauses().iter().enumerate() {
            for &l in d.lits() {
                occurs[l.code()].push(j);
                in_formula[l.var().index() as usize] = true;
            }
        }
        let mut quantified = vec![false; n];
        for v in f.quantified() {
            quantified[v.index() as usize] = true;
        }
        let mut order: Vec<Var> = c.vars().filter(|v| f.is_quantified(*v)).collect();
        order.extend(
            f.quantified()
                .iter()
                .copied()
                .filter(|v| in_formula[v.index() as usize] && c.literal_of(*v).is_none()),
        );
        Ok(ClauseProver {
            clauses: f.clauses().to_vec(),
            target,
            order,
            occurs,
            quantified,
            value: vec![None; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail_pos: vec![0; n],
            trail: Vec::new(),
            qhead: 0,
            decisions: 0,
            budget,
        })
    }

    pub fn decisions(&self) -> u64 {
        self.decisions
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value
            .get(l.var().index() as usize)
            .copied()
            .flatten()
            .map(|b| b == l.is_positive())
    }

    fn assign(&mut self, l: Lit, level: u32, reason: Option<usize>) {
        let v = l.var().index() as usize;
        self.value[v] = Some(l.is_positive());
        self.level[v] = level;
        self.reason[v] = reason;
        self.trail_pos[v] = self.trail.len();
        self.trail.push(l);
    }

    fn backtrack(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            let v = l.var().index() as usize;
            self.value[v] = None;
            self.reason[v] = None;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Unit propagation over `F \ {C}`. Returns a falsified clause.
    fn propagate(&mut self, level: u32) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let l = self.trail[self.qhead];
            self.qhead += 1;
            let false_code = (!l).code();
            if false_code >= self.occurs.len() {
                continue;
            }
            for k in 0..self.occurs[false_code].len() {
                let j = self.occurs[false_code][k];
                if j == self.target {
                    continue;
                }
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &m in self.clauses[j].lits() {
                    match self.lit_value(m) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            n_open += 1;
                            open = Some(m);
                        }
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => {
                        self.qhead = self.trail.len();
                        return Some(j);
                    }
                    1 => self.assign(open.expect("one open literal"), level, Some(j)),
                    _ => {}
                }
            }
        }
        None
    }

    fn earliest_true(&self, j: usize) -> Option<Lit> {
        self.clauses[j]
            .lits()
            .iter()
            .copied()
            .filter(|&l| self.lit_value(l) == Some(true))
            .min_by_key(|l| self.trail_pos[l.var().index() as usize])
    }

    fn falsifying(&self, j: usize) -> BTreeMap<usize, Lit> {
        self.clauses[j]
            .lits()
            .iter()
            .map(|&l| (self.trail_pos[l.var().index() as usize], !l))
            .collect()
    }

    fn atomic(&self, conflict: Option<usize>) -> Option<(BTreeMap<usize, Lit>, BTreeSet<Var>)> {
        if let Some(l) = self.earliest_true(self.target) {
            let pos = self.trail_pos[l.var().index() as usize];
            return Some((BTreeMap::from([(pos, l)]), BTreeSet::new()));
        }
        if let Some(j) = conflict {
            return Some((self.falsifying(j), BTreeSet::new()));
        }
        let c = &self.clauses[self.target];
        'vars: for &lit in c.lits() {
            let w = lit.var();
            let wi = w.index() as usize;
            if !self.quantified[wi] || self.value[wi].is_some() {
                continue;
            }
            let mut p = BTreeMap::new();
            for &j in &self.occurs[(!lit).code()] {
                if j == self.target || resolvable_on(c, &self.clauses[j]) != Some(w) {
                    continue;
                }
                match self.earliest_true(j) {
                    Some(l) => {
                        p.insert(self.trail_pos[l.var().index() as usize], l);
                    }
                    None => continue 'vars,
                }
            }
            return Some((p, BTreeSet::from([w])));
        }
        None
    }

    /// Replaces implied bindings at levels `>= min_level` by the bindings
    /// falsifying the rest of their reason clauses, latest first.
    fn explain(&self, mut p: BTreeMap<usize, Lit>, min_level: u32) -> BTreeMap<usize, Lit> {
        let mut done = BTreeMap::new();
        while let Some((pos, l)) = p.pop_last() {
            let v = l.var().index() as usize;
            match self.reason[v] {
                Some(r) if self.level[v] >= min_level => {
                    for &m in self.clauses[r].lits() {
                        if m.var() != l.var() {
                            p.insert(self.trail_pos[m.var().index() as usize], !m);
                        }
                    }
                }
                _ => {
                    done.insert(pos, l);
                }
            }
        }
        done
    }

    fn next_decision(&self) -> Option<Var> {
        self.order
            .iter()
            .copied()
            .find(|v| self.value[v.index() as usize].is_none())
    }

    fn node(&mut self, level: u32, conflict: Option<usize>) -> NodeResult {
        if let Some((p, e)) = self.atomic(conflict) {
            return NodeResult::Red(self.explain(p, level), e);
        }
        let Some(d) = self.next_decision() else {
            return NodeResult::NonRed;
        };
        let first = self.clauses[self.target]
            .literal_of(d)
            .map_or(false, |l| l.is_positive());
        let mut branches = Vec::with_capacity(2);
        for value in [first, !first] {
            if self.decisions >= self.budget {
                return NodeResult::Budget;
            }
            self.decisions += 1;
            let mark = self.trail.len();
            self.assign(d.lit(value), level + 1, None);
            let confl = self.propagate(level + 1);
            let r = self.node(level + 1, confl);
            self.backtrack(mark);
            match r {
                NodeResult::Red(p, e) => {
                    if !p.values().any(|l| l.var() == d) {
                        return NodeResult::Red(self.explain(p, level), e);
                    }
                    branches.push((p, e));
                }
                other => return other,
            }
        }
        let (p1, e1) = branches.pop().expect("two branches");
        let (p0, mut e0) = branches.pop().expect("two branches");
        let mut joined = p0;
        joined.extend(p1);
        joined.retain(|_, l| l.var() != d);
        e0.extend(e1);
        NodeResult::Red(self.explain(joined, level), e0)
    }

    /// Derives `(y*, C)` with `y* ⊆ y`.
    pub fn prove(&mut self, y: &Assignment) -> Result<DSequent, ProverFailure> {
        self.backtrack(0);
        self.qhead = 0;
        self.decisions = 0;
        let c = &self.clauses[self.target];
        if c.evaluate(y) == crate::cnf::Status::Satisfied {
            return Err(Error::precondition("target clause is satisfied by the subspace").into());
        }
        for (v, b) in y.iter() {
            if (v.index() as usize) < self.value.len() {
                self.assign(v.lit(b), 0, None);
            }
        }
        let confl = self.propagate(0);
        let out = match self.node(0, confl) {
            NodeResult::Red(p, exclusion) => {
                let subspace = Assignment::from_lits(p.into_values()).expect("consistent trail");
                debug_assert!(subspace.is_subset_of(y));
                Ok(DSequent {
                    subspace,
                    target: self.target,
                    exclusion,
                })
            }
            NodeResult::NonRed => Err(ProverFailure::Incomplete),
            NodeResult::Budget => Err(ProverFailure::Budget(self.budget)),
        };
        self.backtrack(0);
        out
    }
}

/// Proves `C` redundant in a subspace `y* ⊆ y` of the free variables.
pub fn prove_clause_redundant(
    f: &QuantifiedCnf,
    target: usize,
    y: &Assignment,
    decision_budget: u64,
) -> Result<DSequent, ProverFailure> {
    if y.vars().any(|v| f.is_quantified(v)) {
        return Err(Error::precondition("subspace binds a quantified variable").into());
    }
    ClauseProver::new(f, target, decision_budget)?.prove(y)
}
