use std::time::Instant;

use super::{
    ClauseProvenance, ClauseProver, Engine, EngineConfig, EngineStats, LoopEvent, PlugRecord,
    PlugSource, PqeSolution, SolutionStatus,
};
use crate::cnf::{Assignment, Clause, Lit, QuantifiedCnf, Var};
use crate::error::Result;
use crate::sat::{Model, SatConfig, Session, SolveOutcome};

/// Occurrence lists for greedy lifting, kept in step with the growing
/// clause set.
struct Lifter {
    occurs: Vec<Vec<usize>>,
    clauses: Vec<Clause>,
}

impl Lifter {
    fn new(clauses: &[Clause], n_vars: usize) -> Lifter {
        let mut l = Lifter {
            occurs: vec![Vec::new(); n_vars + 1],
            clauses: Vec::new(),
        };
        for c in clauses {
            l.push(c.clone());
        }
        l
    }

    fn push(&mut self, c: Clause) {
        let j = self.clauses.len();
        for v in c.vars() {
            self.occurs[v.index() as usize].push(j);
        }
        self.clauses.push(c);
    }

    fn lift(&self, y: &[Lit], model: &Model) -> Vec<Lit> {
        let mut dropped = vec![false; self.occurs.len()];
        let mut kept = Vec::new();
        for &l in y {
            let v = l.var();
            let needed = self.occurs[v.index() as usize].iter().any(|&j| {
                let c = &self.clauses[j];
                c.contains(l)
                    && !c.lits().iter().any(|&m| {
                        m.var() != v
                            && !dropped[m.var().index() as usize]
                            && model.lit_value(m) == Some(true)
                    })
            });
            if needed {
                kept.push(l);
            } else {
                dropped[v.index() as usize] = true;
            }
        }
        kept
    }
}

fn negation(lits: &[Lit]) -> Clause {
    Clause::new(lits.iter().map(|&l| !l)).expect("assignment literals are consistent")
}

fn assignment(lits: &[Lit]) -> Assignment {
    Assignment::from_lits(lits.iter().copied()).expect("assignment literals are consistent")
}

/// Number of full assignments to `ys` that falsify none of `cs`.
fn open_subspaces(ys: &[Var], cs: &[&Clause]) -> u64 {
    let mut values = std::collections::HashMap::new();
    (0..1u64 << ys.len())
        .filter(|mask| {
            for (i, v) in ys.iter().enumerate() {
                values.insert(*v, (mask >> i) & 1 == 1);
            }
            cs.iter()
                .all(|c| c.lits().iter().any(|l| values.get(&l.var()) == Some(&l.is_positive())))
        })
        .count() as u64
}

/// Takes clause `target` out of `∃X[F]` with the engine named in `cfg`.
pub fn take_out(f: &QuantifiedCnf, target: usize, cfg: &EngineConfig) -> Result<PqeSolution> {
    let c = f.clause(target)?.clone();
    let mut sol = PqeSolution {
        clauses: Vec::new(),
        provenance: Vec::new(),
        status: SolutionStatus::Complete,
        engine: cfg.engine,
        seed: cfg.seed,
        events: Vec::new(),
        stats: EngineStats::default(),
    };
    if !f.is_quantified_clause(target)? {
        sol.provenance.push(ClauseProvenance {
            clause: c.clone(),
            target,
            subspace: Assignment::new(),
        });
        sol.clauses.push(c);
        return Ok(sol);
    }

    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    let sat_cfg = SatConfig {
        seed: cfg.seed,
        conflict_budget: cfg.conflict_budget,
        shrink_failed: cfg.shrink,
        ..SatConfig::default()
    };
    let mut a = Session::new(SatConfig {
        shrink_failed: false,
        ..sat_cfg.clone()
    });
    for (i, cl) in f.clauses().iter().enumerate() {
        if i != target {
            a.add_clause(cl);
        }
    }
    let mut b = Session::with_clauses(sat_cfg, f.clauses());
    a.set_deadline(deadline);
    b.set_deadline(deadline);

    let y_vars: Vec<Var> = f.occurring_free_vars().into_iter().collect();
    let mut lifter = Lifter::new(f.clauses(), f.max_var() as usize);
    let mut prover = match cfg.engine {
        Engine::EgPlus => Some(ClauseProver::new(f, target, cfg.prover_budget)?),
        Engine::Eg => None,
    };
    let not_c: Vec<Lit> = c.lits().iter().map(|&l| !l).collect();
    let mut plugs: Vec<Clause> = Vec::new();
    let track = cfg.check_progress && y_vars.len() <= 16;
    let mut open = track.then(|| 1u64 << y_vars.len());

    let status = loop {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break SolutionStatus::TruncatedBudget;
        }
        sol.stats.iterations += 1;
        let m = match a.solve(&not_c) {
            SolveOutcome::Unsat(_) => break SolutionStatus::Complete,
            SolveOutcome::Unknown => break SolutionStatus::TruncatedBudget,
            SolveOutcome::Sat(m) => m,
        };
        if cfg.clause_cap.is_some_and(|cap| sol.clauses.len() >= cap) {
            break SolutionStatus::TruncatedClauseCap;
        }
        for p in &plugs {
            assert!(m.satisfies(p), "subspace falsifies plugging clause {p:?}");
        }
        let y: Vec<Lit> = y_vars
            .iter()
            .map(|&v| v.lit(m.value(v).expect("model covers the free variables of F")))
            .collect();
        match b.solve(&y) {
            SolveOutcome::Unknown => break SolutionStatus::TruncatedBudget,
            SolveOutcome::Unsat(failed) => {
                let clause = negation(if cfg.generalize { &failed } else { &y });
                a.add_clause(&clause);
                b.add_clause(&clause);
                lifter.push(clause.clone());
                sol.provenance.push(ClauseProvenance {
                    clause: clause.clone(),
                    target,
                    subspace: assignment(&y),
                });
                sol.events.push(LoopEvent::Added {
                    clause: clause.clone(),
                    subspace: assignment(&y),
                });
                sol.clauses.push(clause);
            }
            SolveOutcome::Sat(m2) => {
                let y_star = if cfg.lift { lifter.lift(&y, &m2) } else { y.clone() };
                let model_clause = negation(&y_star);
                let mut record = PlugRecord {
                    clause: model_clause.clone(),
                    subspace: assignment(&y),
                    source: PlugSource::Model,
                    model_clause,
                    dsequent: None,
                };
                if let Some(prover) = prover.as_mut() {
                    sol.stats.prover_calls += 1;
                    match prover.prove(&record.subspace) {
                        Ok(ds) => {
                            let ds_clause = ds.plugging_clause();
                            if ds_clause.len() <= record.model_clause.len() {
                                record.clause = ds_clause;
                                record.source = PlugSource::DSequent;
                            }
                            record.dsequent = Some(ds);
                        }
                        Err(_) => {
                            sol.stats.prover_fallbacks += 1;
                            record.source = PlugSource::Fallback;
                        }
                    }
                }
                a.add_clause(&record.clause);
                plugs.push(record.clause.clone());
                sol.events.push(LoopEvent::Plugged(record));
            }
        }
        if let Some(prev) = open {
            let excluded: Vec<&Clause> = plugs.iter().chain(sol.clauses.iter()).collect();
            let now = open_subspaces(&y_vars, &excluded);
            assert!(now < prev, "iteration did not exclude a new subspace");
            open = Some(now);
        }
    };
    sol.status = status;
    let (sa, sb) = (a.stats(), b.stats());
    sol.stats.sat_calls = sa.calls + sb.calls;
    sol.stats.conflicts = sa.conflicts + sb.conflicts;
    sol.stats.decisions = sa.decisions + sb.decisions;
    Ok(sol)
}

/// Enumerate-and-generalize take-out with model-based plugs.
pub fn eg_pqe(f: &QuantifiedCnf, target: usize, cfg: &EngineConfig) -> Result<PqeSolution> {
    take_out(
        f,
        target,
        &EngineConfig {
            engine: Engine::Eg,
            ..cfg.clone()
        },
    )
}

/// As [`eg_pqe`], but plugs come from redundancy proofs of the target.
pub fn eg_pqe_plus(f: &QuantifiedCnf, target: usize, cfg: &EngineConfig) -> Result<PqeSolution> {
    take_out(
        f,
        target,
        &EngineConfig {
            engine: Engine::EgPlus,
            ..cfg.clone()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_qdimacs;

    fn example1() -> QuantifiedCnf {
        parse_qdimacs("p cnf 4 4\ne 3 4 0\n-3 4 0\n1 3 0\n1 -4 0\n2 4 0\n").unwrap()
    }

    fn cl(l: &[i32]) -> Clause {
        Clause::from_dimacs(l).unwrap()
    }

    fn trace(sol: &PqeSolution) -> Vec<(char, Clause)> {
        sol.events
            .iter()
            .map(|e| match e {
                LoopEvent::Added { clause, .. } => ('B', clause.clone()),
                LoopEvent::Plugged(p) => ('D', p.clause.clone()),
            })
            .collect()
    }

    #[test]
    fn walkthrough_trace_of_both_engines() {
        let f = example1();
        let cfg = EngineConfig {
            check_progress: true,
            ..EngineConfig::default()
        };
        let eg = eg_pqe(&f, 0, &cfg).unwrap();
        assert_eq!(eg.status, SolutionStatus::Complete);
        assert_eq!(trace(&eg), vec![('B', cl(&[1])), ('D', cl(&[-1, -2]))]);
        assert_eq!(eg.clauses, vec![cl(&[1])]);

        let plus = eg_pqe_plus(&f, 0, &cfg).unwrap();
        assert_eq!(trace(&plus), vec![('B', cl(&[1])), ('D', cl(&[-1]))]);
        assert_eq!(plus.clauses, vec![cl(&[1])]);
        let plug = plus.plugs().next().unwrap();
        assert_eq!(plug.model_clause, cl(&[-1, -2]));
        assert_eq!(plug.source, PlugSource::DSequent);
    }

    #[test]
    fn duplicated_target_is_redundant_after_one_query() {
        let mut f = example1();
        f.push_clause(cl(&[-3, 4])).unwrap();
        let sol = eg_pqe(&f, 0, &EngineConfig::default()).unwrap();
        assert!(sol.clauses.is_empty());
        assert_eq!(sol.stats.iterations, 1);
        assert_eq!(sol.stats.sat_calls, 1);
    }

    #[test]
    fn free_target_is_its_own_solution() {
        let f = QuantifiedCnf::new(vec![cl(&[1, 2]), cl(&[-1, 3])], [Var::new(3)]);
        let sol = eg_pqe_plus(&f, 0, &EngineConfig::default()).unwrap();
        assert_eq!(sol.clauses, vec![cl(&[1, 2])]);
        assert!(sol.status.is_complete());
    }

    #[test]
    fn clause_cap_truncates() {
        // ∃x[(x ∨ y1) ∧ (¬x ∨ y2) ∧ (¬x ∨ y3)]: taking out (x ∨ y1) needs
        // y1 ∨ y2 and y1 ∨ y3.
        let f = QuantifiedCnf::new(vec![cl(&[4, 1]), cl(&[-4, 2]), cl(&[-4, 3])], [Var::new(4)]);
        let full = eg_pqe(&f, 0, &EngineConfig::default()).unwrap();
        assert!(full.status.is_complete());
        assert_eq!(full.clauses.len(), 2);
        let capped = eg_pqe(
            &f,
            0,
            &EngineConfig {
                clause_cap: Some(1),
                ..EngineConfig::default()
            },
        )
        .unwrap();
        assert_eq!(capped.status, SolutionStatus::TruncatedClauseCap);
        assert_eq!(capped.clauses.len(), 1);
    }
}
