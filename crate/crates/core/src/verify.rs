//! Semantic checks of PQE solutions by subspace enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, Clause, Lit, QuantifiedCnf, Var};
use crate::error::{Error, Result};
use crate::sat::{SatConfig, Session, SolveOutcome};

pub const DEFAULT_FREE_VAR_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equivalent,
    /// Full assignment to the free variables where the two sides differ.
    Inequivalent { witness: Assignment },
    Skipped { free_vars: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub subspaces_checked: u64,
    pub free_vars: usize,
}

impl VerifyReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Checks `∃X[F] ≡ H ∧ ∃X[F \ G]` in every full subspace of the free
/// variables, with the default cap on their number.
pub fn check_pqe_solution(f: &QuantifiedCnf, g: &[usize], h: &[Clause]) -> Result<VerifyReport> {
    check_pqe_solution_capped(f, g, h, DEFAULT_FREE_VAR_CAP)
}

pub fn check_pqe_solution_capped(
    f: &QuantifiedCnf,
    g: &[usize],
    h: &[Clause],
    cap: usize,
) -> Result<VerifyReport> {
    for &i in g {
        f.clause(i)?;
    }
    for c in h {
        for v in c.vars() {
            if f.is_quantified(v) {
                return Err(Error::precondition(format!(
                    "solution clause {c:?} mentions quantified {v}"
                )));
            }
        }
    }
    let removed: BTreeSet<usize> = g.iter().copied().collect();
    let ys: Vec<Var> = f
        .occurring_free_vars()
        .into_iter()
        .chain(h.iter().flat_map(|c| c.vars()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if ys.len() > cap {
        return Ok(VerifyReport {
            verdict: Verdict::Skipped {
                free_vars: ys.len(),
                cap,
            },
            subspaces_checked: 0,
            free_vars: ys.len(),
        });
    }
    let mut lhs = Session::with_clauses(SatConfig::default(), f.clauses());
    let mut rhs = Session::with_clauses(
        SatConfig::default(),
        f.clauses()
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, c)| c)
            .chain(h.iter()),
    );
    let n = ys.len();
    let mut checked = 0;
    for mask in 0..1u64 << n {
        // The first variable is the most significant bit, so the first
        // disagreement found is the lexicographically smallest.
        let y: Vec<Lit> = ys
            .iter()
            .enumerate()
            .map(|(i, v)| v.lit((mask >> (n - 1 - i)) & 1 == 1))
            .collect();
        checked += 1;
        let l = decide(&mut lhs, &y)?;
        let r = decide(&mut rhs, &y)?;
        if l != r {
            return Ok(VerifyReport {
                verdict: Verdict::Inequivalent {
                    witness: Assignment::from_lits(y).expect("consistent"),
                },
                subspaces_checked: checked,
                free_vars: n,
            });
        }
    }
    Ok(VerifyReport {
        verdict: Verdict::Equivalent,
        subspaces_checked: checked,
        free_vars: n,
    })
}

fn decide(s: &mut Session, assumptions: &[Lit]) -> Result<bool> {
    match s.solve(assumptions) {
        SolveOutcome::Sat(_) => Ok(true),
        SolveOutcome::Unsat(_) => Ok(false),
        SolveOutcome::Unknown => Err(Error::Budget("verification query".into())),
    }
}

/// `F ⊨ Q` for every `Q ∈ h`. `None` if a query exceeds `budget` conflicts.
pub fn check_implication(f: &[Clause], h: &[Clause], budget: Option<u64>) -> Option<bool> {
    let mut s = Session::with_clauses(
        SatConfig {
            conflict_budget: budget,
            ..SatConfig::default()
        },
        f,
    );
    for q in h {
        let negated: Vec<Lit> = q.lits().iter().map(|&l| !l).collect();
        match s.solve(&negated) {
            SolveOutcome::Sat(_) => return Some(false),
            SolveOutcome::Unsat(_) => {}
            SolveOutcome::Unknown => return None,
        }
    }
    Some(true)
}

/// Drops every clause of `h` implied by `rest` (normally `F \ G`).
///
/// One pass in descending clause length; ties keep input order. The
/// surviving clauses are returned in input order.
pub fn prune_redundant(h: &[Clause], rest: &[Clause]) -> Vec<Clause> {
    let mut order: Vec<usize> = (0..h.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(h[i].len()));
    let mut s = Session::with_clauses(SatConfig::default(), rest);
    let mut keep = vec![true; h.len()];
    for i in order {
        let negated: Vec<Lit> = h[i].lits().iter().map(|&l| !l).collect();
        if s.solve(&negated).is_unsat() {
            keep[i] = false;
        }
    }
    h.iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c.clone())
        .collect()
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

    #[test]
    fn example_solution_verifies() {
        let f = example1();
        let r = check_pqe_solution(&f, &[0], &[cl(&[1])]).unwrap();
        assert!(r.is_equivalent());
        assert_eq!(r.subspaces_checked, 4);
    }

    #[test]
    fn empty_solution_is_refuted_with_smallest_witness() {
        let f = example1();
        let r = check_pqe_solution(&f, &[0], &[]).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::Inequivalent {
                witness: Assignment::from_dimacs(&[-1, 2]).unwrap()
            }
        );
        assert!(r.to_json().contains("INEQUIVALENT"));
    }

    #[test]
    fn nothing_taken_out() {
        assert!(check_pqe_solution(&example1(), &[], &[]).unwrap().is_equivalent());
    }

    #[test]
    fn cap_skips() {
        let r = check_pqe_solution_capped(&example1(), &[0], &[], 1).unwrap();
        assert!(matches!(r.verdict, Verdict::Skipped { free_vars: 2, cap: 1 }));
    }

    #[test]
    fn implication_checks() {
        let f = example1();
        assert_eq!(check_implication(f.clauses(), &[cl(&[1])], None), Some(true));
        assert_eq!(check_implication(f.clauses(), &[cl(&[9])], None), Some(false));
    }

    #[test]
    fn pruning() {
        let h = vec![cl(&[1]), cl(&[1, 2])];
        assert_eq!(prune_redundant(&h, &[]), h);
        assert_eq!(prune_redundant(&[cl(&[1, 2])], &[cl(&[1])]), Vec::<Clause>::new());
    }
}
