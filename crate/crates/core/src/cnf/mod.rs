//! Clauses, partial assignments and existentially quantified CNF formulas.
//!
//! A [`QuantifiedCnf`] is the problem container for every algorithm in the
//! crate: a clause list `F`, a quantified variable set `X` and a free
//! variable set `Y`. Clauses are addressed by index, so duplicate clauses
//! are distinct members of the formula.

mod assignment;
mod clause;
mod qdimacs;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use assignment::Assignment;
pub use clause::{resolvable_on, resolve, Clause};
pub use qdimacs::{parse_dimacs_clauses, parse_qdimacs, write_dimacs_clauses, write_qdimacs};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    /// Panics on index 0, which DIMACS reserves as the clause terminator.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn lit(self, positive: bool) -> Lit {
        Lit::new(self, positive)
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A literal: a variable together with a polarity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.0 << 1) | u32::from(!positive))
    }

    /// Converts a non-zero DIMACS integer.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(Var::new(value.unsigned_abs()), value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = (self.0 >> 1) as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code `2 * var + sign`, used to index watch lists.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// The value the variable must take for this literal to be true.
    pub fn satisfying_value(self) -> bool {
        self.is_positive()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Lit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Lit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i32::deserialize(d)?;
        if v == 0 {
            return Err(serde::de::Error::custom("0 is not a literal"));
        }
        Ok(Lit::from_dimacs(v))
    }
}

/// Three-valued status of a clause or formula under a partial assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Satisfied,
    Falsified,
    Undetermined,
}

/// `∃X[F(X,Y)]` with clause identity by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifiedCnf {
    clauses: Vec<Clause>,
    quantified: BTreeSet<Var>,
    free: BTreeSet<Var>,
}

impl QuantifiedCnf {
    /// Builds a formula where every variable not in `quantified` is free.
    pub fn new(clauses: Vec<Clause>, quantified: impl IntoIterator<Item = Var>) -> QuantifiedCnf {
        let quantified: BTreeSet<Var> = quantified.into_iter().collect();
        let free = clauses
            .iter()
            .flat_map(|c| c.vars())
            .filter(|v| !quantified.contains(v))
            .collect();
        QuantifiedCnf {
            clauses,
            quantified,
            free,
        }
    }

    /// Builds a formula with an explicit partition, validating that the
    /// sets are disjoint and cover every clause variable.
    pub fn with_partition(
        clauses: Vec<Clause>,
        quantified: impl IntoIterator<Item = Var>,
        free: impl IntoIterator<Item = Var>,
    ) -> Result<QuantifiedCnf> {
        let quantified: BTreeSet<Var> = quantified.into_iter().collect();
        let free: BTreeSet<Var> = free.into_iter().collect();
        if let Some(v) = quantified.intersection(&free).next() {
            return Err(Error::OverlappingPartition(*v));
        }
        for c in &clauses {
            for v in c.vars() {
                if !quantified.contains(&v) && !free.contains(&v) {
                    return Err(Error::UnknownVariable(v));
                }
            }
        }
        Ok(QuantifiedCnf {
            clauses,
            quantified,
            free,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> Result<&Clause> {
        self.clauses.get(index).ok_or(Error::ClauseIndex(index))
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn quantified(&self) -> &BTreeSet<Var> {
        &self.quantified
    }

    pub fn free(&self) -> &BTreeSet<Var> {
        &self.free
    }

    pub fn is_quantified(&self, v: Var) -> bool {
        self.quantified.contains(&v)
    }

    pub fn is_free(&self, v: Var) -> bool {
        self.free.contains(&v)
    }

    /// Largest variable index of `X ∪ Y` (0 for an empty universe).
    pub fn max_var(&self) -> u32 {
        let q = self.quantified.iter().next_back().map_or(0, |v| v.index());
        let f = self.free.iter().next_back().map_or(0, |v| v.index());
        q.max(f)
    }

    /// A clause is quantified when it mentions a variable of `X`.
    pub fn is_quantified_clause(&self, index: usize) -> Result<bool> {
        Ok(self
            .clause(index)?
            .vars()
            .any(|v| self.quantified.contains(&v)))
    }

    /// Free variables that actually occur in some clause.
    pub fn occurring_free_vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.vars())
            .filter(|v| self.free.contains(v))
            .collect()
    }

    /// Appends a clause whose variables must already belong to `X ∪ Y`.
    pub fn push_clause(&mut self, clause: Clause) -> Result<usize> {
        for v in clause.vars() {
            if !self.quantified.contains(&v) && !self.free.contains(&v) {
                return Err(Error::UnknownVariable(v));
            }
        }
        self.clauses.push(clause);
        Ok(self.clauses.len() - 1)
    }

    /// Registers an additional free variable.
    pub fn add_free_var(&mut self, v: Var) -> Result<()> {
        if self.quantified.contains(&v) {
            return Err(Error::OverlappingPartition(v));
        }
        self.free.insert(v);
        Ok(())
    }

    /// `F \ G`, keeping the partition. Clause indices of the result are
    /// renumbered in order.
    pub fn without_clauses(&self, removed: &[usize]) -> QuantifiedCnf {
        let removed: BTreeSet<usize> = removed.iter().copied().collect();
        QuantifiedCnf {
            clauses: self
                .clauses
                .iter()
                .enumerate()
                .filter(|(i, _)| !removed.contains(i))
                .map(|(_, c)| c.clone())
                .collect(),
            quantified: self.quantified.clone(),
            free: self.free.clone(),
        }
    }

    /// Same clauses under a different quantifier partition.
    pub fn repartition(
        &self,
        quantified: impl IntoIterator<Item = Var>,
        free: impl IntoIterator<Item = Var>,
    ) -> Result<QuantifiedCnf> {
        QuantifiedCnf::with_partition(self.clauses.clone(), quantified, free)
    }

    /// `F|q`: drops satisfied clauses and strips falsified literals. The
    /// result remembers the original index of every surviving clause.
    pub fn cofactor(&self, q: &Assignment) -> Cofactor {
        let mut clauses = Vec::new();
        let mut origin = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            if let Some(reduced) = c.cofactor(q) {
                clauses.push(reduced);
                origin.push(i);
            }
        }
        Cofactor {
            formula: QuantifiedCnf {
                clauses,
                quantified: self.quantified.clone(),
                free: self.free.clone(),
            },
            origin,
        }
    }

    pub fn evaluate(&self, q: &Assignment) -> Status {
        let mut all_satisfied = true;
        for c in &self.clauses {
            match c.evaluate(q) {
                Status::Falsified => return Status::Falsified,
                Status::Undetermined => all_satisfied = false,
                Status::Satisfied => {}
            }
        }
        if all_satisfied {
            Status::Satisfied
        } else {
            Status::Undetermined
        }
    }

    /// Whether clause `index` is blocked on `w` in the subspace `q`: no
    /// other clause of `F|q` resolves with `C|q` on `w`.
    pub fn is_blocked(&self, index: usize, w: Var, q: &Assignment) -> Result<bool> {
        let c = self.clause(index)?;
        let lit = c
            .literal_of(w)
            .ok_or_else(|| Error::precondition(format!("{w} does not occur in clause {index}")))?;
        match c.evaluate(q) {
            Status::Falsified => {
                return Err(Error::precondition(format!(
                    "clause {index} is falsified by the subspace"
                )))
            }
            Status::Satisfied => return Ok(true),
            Status::Undetermined => {}
        }
        if q.value(w).is_some() {
            return Err(Error::precondition(format!("{w} is assigned by the subspace")));
        }
        let reduced = c.cofactor(q).expect("clause is not satisfied");
        for (j, d) in self.clauses.iter().enumerate() {
            if j == index || !d.contains(!lit) {
                continue;
            }
            if let Some(dr) = d.cofactor(q) {
                if resolvable_on(&reduced, &dr) == Some(w) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A cofactored formula together with the original index of each clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cofactor {
    pub formula: QuantifiedCnf,
    pub origin: Vec<usize>,
}

impl Cofactor {
    pub fn cofactor(&self, r: &Assignment) -> Cofactor {
        let inner = self.formula.cofactor(r);
        Cofactor {
            origin: inner.origin.iter().map(|&i| self.origin[i]).collect(),
            formula: inner.formula,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example1() -> QuantifiedCnf {
        parse_qdimacs("p cnf 4 4\ne 3 4 0\n-3 4 0\n1 3 0\n1 -4 0\n2 4 0\n").unwrap()
    }

    fn asg(lits: &[i32]) -> Assignment {
        Assignment::from_dimacs(lits).unwrap()
    }

    #[test]
    fn literal_encoding() {
        let l = Lit::from_dimacs(-7);
        assert_eq!(l.var(), Var::new(7));
        assert!(!l.is_positive());
        assert_eq!((!l).to_dimacs(), 7);
        assert_eq!(l.var(), (!l).var());
    }

    #[test]
    fn cofactor_matches_walkthrough_subspace() {
        let f = example1();
        let cf = f.cofactor(&asg(&[-1, 2]));
        let got: Vec<Vec<i32>> = cf.formula.clauses().iter().map(|c| c.to_dimacs()).collect();
        assert_eq!(got, vec![vec![-3, 4], vec![3], vec![-4]]);
        assert_eq!(cf.origin, vec![0, 1, 2]);
    }

    #[test]
    fn empty_cofactor_is_identity() {
        let f = example1();
        let cf = f.cofactor(&Assignment::new());
        assert_eq!(cf.formula, f);
        assert_eq!(cf.origin, vec![0, 1, 2, 3]);
    }

    #[test]
    fn blocked_in_subspace() {
        let f = example1();
        let x3 = Var::new(3);
        assert!(f.is_blocked(0, x3, &asg(&[1])).unwrap());
        assert!(!f.is_blocked(0, x3, &Assignment::new()).unwrap());
    }

    #[test]
    fn pure_variable_is_blocked() {
        let f = QuantifiedCnf::new(
            vec![Clause::from_dimacs(&[1, 5]).unwrap(), Clause::from_dimacs(&[-1, 2]).unwrap()],
            [Var::new(5)],
        );
        assert!(f.is_blocked(0, Var::new(5), &Assignment::new()).unwrap());
    }

    #[test]
    fn blocked_rejects_falsified_clause_and_assigned_pivot() {
        let f = example1();
        let x3 = Var::new(3);
        assert!(matches!(
            f.is_blocked(0, x3, &asg(&[3, -4])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            f.is_blocked(0, x3, &asg(&[3])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            f.is_blocked(0, Var::new(1), &Assignment::new()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn evaluate_statuses() {
        let f = example1();
        let c1 = &f.clauses()[0];
        assert_eq!(c1.evaluate(&asg(&[3, -4])), Status::Falsified);
        assert_eq!(c1.evaluate(&Assignment::new()), Status::Undetermined);
        assert_eq!(Clause::empty().evaluate(&Assignment::new()), Status::Falsified);
        assert_eq!(f.evaluate(&asg(&[1, 2, -3, -4])), Status::Satisfied);
        assert_eq!(f.evaluate(&asg(&[1])), Status::Undetermined);
    }

    #[test]
    fn partition_validation() {
        let c = vec![Clause::from_dimacs(&[1, 2]).unwrap()];
        assert_eq!(
            QuantifiedCnf::with_partition(c.clone(), [Var::new(1)], [Var::new(1), Var::new(2)]),
            Err(Error::OverlappingPartition(Var::new(1)))
        );
        assert_eq!(
            QuantifiedCnf::with_partition(c, [Var::new(1)], []),
            Err(Error::UnknownVariable(Var::new(2)))
        );
    }

    #[test]
    fn quantified_clause_classification() {
        let f = example1();
        assert!(f.is_quantified_clause(0).unwrap());
        let g = QuantifiedCnf::new(vec![Clause::from_dimacs(&[1, 2]).unwrap()], [Var::new(3)]);
        assert!(!g.is_quantified_clause(0).unwrap());
        assert_eq!(g.is_quantified_clause(3), Err(Error::ClauseIndex(3)));
    }
}
