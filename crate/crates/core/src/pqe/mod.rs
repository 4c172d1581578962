//! Partial quantifier elimination: take clauses out of `∃X[F]`.
//!
//! Both engines enumerate subspaces of the free variables where
//! `F \ {C}` does not imply `C`. Where `F` is unsatisfiable they add a
//! clause over `Y` to the solution; elsewhere they plug the subspace. The
//! plus engine derives plugs from a redundancy proof of `C` alone.

mod dsequent;
mod engine;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cnf::{write_dimacs_clauses, Assignment, Clause, QuantifiedCnf, Var};
use crate::error::Result;

pub use dsequent::{
    atomic_dsequent, join_dsequents, prove_clause_redundant, ClauseProver, DSequent, ProverFailure,
};
pub use engine::{eg_pqe, eg_pqe_plus, take_out};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Engine {
    Eg,
    #[default]
    EgPlus,
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "eg" | "eg-pqe" => Ok(Engine::Eg),
            "egplus" | "eg+" | "eg-pqe+" | "eg_plus" => Ok(Engine::EgPlus),
            _ => Err(format!("unknown engine `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub engine: Engine,
    pub seed: u64,
    /// Conflicts per SAT call.
    pub conflict_budget: Option<u64>,
    /// Wall-clock limit per take-out.
    pub time_budget: Option<Duration>,
    /// Stop once this many clauses have been added to the solution.
    pub clause_cap: Option<usize>,
    pub lift: bool,
    /// Minimize failed-assumption sets before building clauses.
    pub shrink: bool,
    /// Build added clauses from the failed assumptions. When off, the
    /// clause is the longest one falsified by the subspace.
    pub generalize: bool,
    /// Decision budget of the redundancy prover.
    pub prover_budget: u64,
    /// Assert that every iteration shrinks the set of open subspaces.
    pub check_progress: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            engine: Engine::EgPlus,
            seed: 0,
            conflict_budget: None,
            time_budget: Some(Duration::from_secs(10)),
            clause_cap: None,
            lift: true,
            shrink: false,
            generalize: true,
            prover_budget: 2000,
            check_progress: false,
        }
    }
}

impl EngineConfig {
    pub fn with_engine(engine: Engine) -> Self {
        EngineConfig {
            engine,
            ..EngineConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionStatus {
    #[serde(rename = "COMPLETE")]
    Complete,
    #[serde(rename = "TRUNCATED(budget)")]
    TruncatedBudget,
    #[serde(rename = "TRUNCATED(clause-cap)")]
    TruncatedClauseCap,
}

impl SolutionStatus {
    pub fn is_complete(self) -> bool {
        self == SolutionStatus::Complete
    }
}

impl std::fmt::Display for SolutionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolutionStatus::Complete => "COMPLETE",
            SolutionStatus::TruncatedBudget => "TRUNCATED(budget)",
            SolutionStatus::TruncatedClauseCap => "TRUNCATED(clause-cap)",
        })
    }
}

/// Where a solution clause came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseProvenance {
    pub clause: Clause,
    /// Index of the target clause in the formula handed to the engine.
    pub target: usize,
    /// Subspace whose unsatisfiability the clause generalizes. Empty for
    /// copied free clauses.
    pub subspace: Assignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlugSource {
    Model,
    DSequent,
    /// The prover gave up and the model-based plug was used.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlugRecord {
    pub clause: Clause,
    pub subspace: Assignment,
    pub source: PlugSource,
    /// Plug built from the (lifted) model of `F` in the subspace.
    pub model_clause: Clause,
    pub dsequent: Option<DSequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LoopEvent {
    Added { clause: Clause, subspace: Assignment },
    Plugged(PlugRecord),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub iterations: u64,
    pub sat_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub prover_calls: u64,
    pub prover_fallbacks: u64,
}

impl std::ops::AddAssign for EngineStats {
    fn add_assign(&mut self, o: EngineStats) {
        self.iterations += o.iterations;
        self.sat_calls += o.sat_calls;
        self.conflicts += o.conflicts;
        self.decisions += o.decisions;
        self.prover_calls += o.prover_calls;
        self.prover_fallbacks += o.prover_fallbacks;
    }
}

/// Free clauses `H` with `∃X[F] ≡ H ∧ ∃X[F \ G]`, plus how they arose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqeSolution {
    pub clauses: Vec<Clause>,
    pub provenance: Vec<ClauseProvenance>,
    pub status: SolutionStatus,
    pub engine: Engine,
    pub seed: u64,
    pub events: Vec<LoopEvent>,
    pub stats: EngineStats,
}

impl PqeSolution {
    pub fn plugs(&self) -> impl Iterator<Item = &PlugRecord> {
        self.events.iter().filter_map(|e| match e {
            LoopEvent::Plugged(p) => Some(p),
            LoopEvent::Added { .. } => None,
        })
    }

    /// Number of subspaces the main loop examined.
    pub fn visited_subspaces(&self) -> usize {
        self.events.len()
    }

    pub fn to_dimacs(&self) -> String {
        write_dimacs_clauses(&self.clauses)
    }

    /// JSON sidecar with status, provenance and the loop trace.
    pub fn provenance_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }
}

/// Shortens `y` (the free part of a model of `F`) to `y* ⊆ y` such that
/// `y*` with the quantified part of `model` still satisfies every clause.
///
/// Variables are dropped greedily in ascending order.
pub fn lift_model(f: &QuantifiedCnf, model: &Assignment) -> Assignment {
    let mut dropped: BTreeSet<Var> = BTreeSet::new();
    let mut occurs: BTreeMap<Var, Vec<usize>> = BTreeMap::new();
    for (j, c) in f.clauses().iter().enumerate() {
        for v in c.vars() {
            occurs.entry(v).or_default().push(j);
        }
    }
    for (v, b) in model.iter() {
        if !f.is_free(v) {
            continue;
        }
        let needed = occurs.get(&v).into_iter().flatten().any(|&j| {
            let c = &f.clauses()[j];
            c.literal_of(v).is_some_and(|l| l.is_positive() == b)
                && !c.lits().iter().any(|&l| {
                    l.var() != v && !dropped.contains(&l.var()) && model.lit_value(l) == Some(true)
                })
        });
        if !needed {
            dropped.insert(v);
        }
    }
    model.restrict(|v| f.is_free(v) && !dropped.contains(&v))
}

/// Takes the clauses at `targets` out one at a time. Each take-out sees the
/// clauses produced by the earlier ones.
pub fn take_out_many(f: &QuantifiedCnf, targets: &[usize], cfg: &EngineConfig) -> Result<PqeSolution> {
    for &t in targets {
        f.clause(t)?;
    }
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut out = PqeSolution {
        clauses: Vec::new(),
        provenance: Vec::new(),
        status: SolutionStatus::Complete,
        engine: cfg.engine,
        seed: cfg.seed,
        events: Vec::new(),
        stats: EngineStats::default(),
    };
    for &t in targets {
        if !removed.insert(t) {
            continue;
        }
        let mut clauses = Vec::new();
        let mut target = 0;
        for (i, c) in f.clauses().iter().enumerate() {
            if i == t {
                target = clauses.len();
                clauses.push(c.clone());
            } else if !removed.contains(&i) {
                clauses.push(c.clone());
            }
        }
        clauses.extend(out.clauses.iter().cloned());
        let g = QuantifiedCnf::with_partition(clauses, f.quantified().iter().copied(), f.free().iter().copied())?;
        let mut cfg_t = cfg.clone();
        if let Some(cap) = cfg.clause_cap {
            cfg_t.clause_cap = Some(cap.saturating_sub(out.clauses.len()).max(1));
        }
        let part = take_out(&g, target, &cfg_t)?;
        for mut p in part.provenance {
            p.target = t;
            out.provenance.push(p);
        }
        out.clauses.extend(part.clauses);
        out.events.extend(part.events);
        out.stats += part.stats;
        if !part.status.is_complete() {
            out.status = part.status;
            break;
        }
        if cfg.clause_cap.is_some_and(|cap| out.clauses.len() >= cap) && targets.iter().any(|x| !removed.contains(x)) {
            out.status = SolutionStatus::TruncatedClauseCap;
            break;
        }
    }
    Ok(out)
}

/// Quantifier elimination as the take-out of every quantified clause.
/// Free clauses of `F` are copied into the result.
pub fn qe(f: &QuantifiedCnf, cfg: &EngineConfig) -> Result<PqeSolution> {
    let mut targets = Vec::new();
    let mut free = Vec::new();
    for i in 0..f.len() {
        if f.is_quantified_clause(i)? {
            targets.push(i);
        } else {
            free.push(i);
        }
    }
    let mut sol = take_out_many(f, &targets, cfg)?;
    let copied: Vec<ClauseProvenance> = free
        .iter()
        .map(|&i| ClauseProvenance {
            clause: f.clauses()[i].clone(),
            target: i,
            subspace: Assignment::new(),
        })
        .collect();
    let mut clauses: Vec<Clause> = copied.iter().map(|p| p.clause.clone()).collect();
    clauses.extend(sol.clauses);
    sol.clauses = clauses;
    let mut prov = copied;
    prov.extend(sol.provenance);
    sol.provenance = prov;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_qdimacs;

    #[test]
    fn lifting_keeps_both_bindings_of_walkthrough_model() {
        let f = parse_qdimacs("p cnf 4 4\ne 3 4 0\n-3 4 0\n1 3 0\n1 -4 0\n2 4 0\n").unwrap();
        let m = Assignment::from_dimacs(&[1, 2, -3, -4]).unwrap();
        assert_eq!(lift_model(&f, &m), Assignment::from_dimacs(&[1, 2]).unwrap());
        let m = Assignment::from_dimacs(&[1, 2, -3, 4]).unwrap();
        assert_eq!(lift_model(&f, &m), Assignment::from_dimacs(&[1]).unwrap());
    }

    #[test]
    fn status_strings() {
        assert_eq!(
            serde_json::to_string(&SolutionStatus::TruncatedClauseCap).unwrap(),
            "\"TRUNCATED(clause-cap)\""
        );
        assert_eq!(SolutionStatus::Complete.to_string(), "COMPLETE");
    }
}
