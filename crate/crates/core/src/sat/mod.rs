//! Incremental satisfiability under assumptions.
//!
//! [`Session`] is the bundled conflict-driven solver. Everything above this
//! module talks to it through [`SatBackend`], so a stronger engine can be
//! swapped in without touching the PQE loops.

mod heap;
mod solver;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, Clause, Lit, Var};

pub use solver::Session;

/// Per-session knobs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatConfig {
    /// 0 keeps the search fully deterministic with all phases false.
    pub seed: u64,
    /// Conflicts allowed per `solve` call before giving up.
    pub conflict_budget: Option<u64>,
    /// Drop-one-and-retest minimization of failed assumption sets.
    pub shrink_failed: bool,
    /// Reuse the last value of a variable as its next decision phase.
    pub phase_saving: bool,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig {
            seed: 0,
            conflict_budget: None,
            shrink_failed: false,
            phase_saving: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatStats {
    pub calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

impl std::ops::Sub for SatStats {
    type Output = SatStats;
    fn sub(self, o: SatStats) -> SatStats {
        SatStats {
            calls: self.calls - o.calls,
            conflicts: self.conflicts - o.conflicts,
            decisions: self.decisions - o.decisions,
            propagations: self.propagations - o.propagations,
        }
    }
}

/// Dense model over every variable the session has seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<Option<bool>>,
}

impl Model {
    pub(crate) fn new(values: Vec<Option<bool>>) -> Model {
        Model { values }
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.values.get(v.index() as usize).copied().flatten()
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value(l.var()).map(|b| b == l.is_positive())
    }

    pub fn satisfies(&self, c: &Clause) -> bool {
        c.lits().iter().any(|&l| self.lit_value(l) == Some(true))
    }

    /// Bindings of the variables accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Var) -> bool) -> Assignment {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, b)| {
                let b = (*b)?;
                let v = Var::new(i as u32);
                keep(v).then_some((v, b))
            })
            .collect()
    }

    pub fn to_assignment(&self) -> Assignment {
        self.restrict(|_| true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    /// Assumptions sufficient for unsatisfiability; empty when the clause
    /// set alone is contradictory.
    Unsat(Vec<Lit>),
    /// Budget ran out before a verdict.
    Unknown,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat(_))
    }
}

/// Contract every solver backend must honour.
pub trait SatBackend {
    fn add_clause(&mut self, clause: &Clause);

    /// Assumptions must not contain a complementary pair.
    fn solve(&mut self, assumptions: &[Lit]) -> SolveOutcome;

    fn stats(&self) -> SatStats;

    fn set_deadline(&mut self, deadline: Option<Instant>);
}

/// One-shot satisfiability check of a clause list.
pub fn solve_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>, assumptions: &[Lit]) -> SolveOutcome {
    let mut s = Session::new(SatConfig::default());
    for c in clauses {
        s.add_clause(c);
    }
    s.solve(assumptions)
}

/// Whether `clauses ⊨ q`, checked as unsatisfiability of `clauses ∧ ¬q`.
/// `None` when the budget runs out.
pub fn implies<'a>(
    clauses: impl IntoIterator<Item = &'a Clause>,
    q: &Clause,
    budget: Option<u64>,
) -> Option<bool> {
    let mut s = Session::new(SatConfig {
        conflict_budget: budget,
        ..SatConfig::default()
    });
    for c in clauses {
        s.add_clause(c);
    }
    let negated: Vec<Lit> = q.lits().iter().map(|&l| !l).collect();
    match s.solve(&negated) {
        SolveOutcome::Sat(_) => Some(false),
        SolveOutcome::Unsat(_) => Some(true),
        SolveOutcome::Unknown => None,
    }
}
