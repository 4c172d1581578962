use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Assignment, Lit, Status, Var};
use crate::error::{Error, Result};

/// A disjunction of literals, kept sorted by variable with no repeats.
///
/// Tautologies cannot be represented; the empty clause means "false".
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Err(Error::Tautology(pair[0].var()));
            }
        }
        Ok(Clause { lits })
    }

    pub fn from_dimacs(lits: &[i32]) -> Result<Clause> {
        if lits.contains(&0) {
            return Err(Error::precondition("0 is not a literal"));
        }
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn unit(lit: Lit) -> Clause {
        Clause { lits: vec![lit] }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn literal_of(&self, v: Var) -> Option<Lit> {
        if self.contains(v.pos()) {
            Some(v.pos())
        } else if self.contains(v.neg()) {
            Some(v.neg())
        } else {
            None
        }
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }

    /// `C|q`, or `None` when `q` satisfies the clause.
    pub fn cofactor(&self, q: &Assignment) -> Option<Clause> {
        let mut kept = Vec::with_capacity(self.lits.len());
        for &l in &self.lits {
            match q.lit_value(l) {
                Some(true) => return None,
                Some(false) => {}
                None => kept.push(l),
            }
        }
        Some(Clause { lits: kept })
    }

    pub fn evaluate(&self, q: &Assignment) -> Status {
        let mut open = false;
        for &l in &self.lits {
            match q.lit_value(l) {
                Some(true) => return Status::Satisfied,
                Some(false) => {}
                None => open = true,
            }
        }
        if open {
            Status::Undetermined
        } else {
            Status::Falsified
        }
    }

    /// Evaluates under a total assignment given as a dense value table
    /// indexed by variable.
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| values[l.var().index() as usize] == l.is_positive())
    }

    /// Disjunction with extra literals. Fails if the result is tautological.
    pub fn extended(&self, extra: impl IntoIterator<Item = Lit>) -> Result<Clause> {
        Clause::new(self.lits.iter().copied().chain(extra))
    }

    /// The assignment falsifying every literal of the clause.
    pub fn falsifying_assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for &l in &self.lits {
            a.insert(l.var(), !l.is_positive());
        }
        a
    }
}

/// The unique clashing variable if `c1` and `c2` clash on exactly one.
pub fn resolvable_on(c1: &Clause, c2: &Clause) -> Option<Var> {
    let mut found = None;
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&c1.lits, &c2.lits);
    while i < a.len() && j < b.len() {
        let (va, vb) = (a[i].var(), b[j].var());
        if va < vb {
            i += 1;
        } else if vb < va {
            j += 1;
        } else {
            if a[i] != b[j] {
                if found.is_some() {
                    return None;
                }
                found = Some(va);
            }
            i += 1;
            j += 1;
        }
    }
    found
}

/// Resolvent of `c1` and `c2` on `w`.
pub fn resolve(c1: &Clause, c2: &Clause, w: Var) -> Result<Clause> {
    if resolvable_on(c1, c2) != Some(w) {
        return Err(Error::NotResolvable(w));
    }
    let lits = c1
        .lits
        .iter()
        .chain(c2.lits.iter())
        .copied()
        .filter(|l| l.var() != w);
    let resolvent = Clause::new(lits);
    debug_assert!(resolvent.is_ok(), "resolvent of a resolvable pair is never tautological");
    resolvent
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{l} ")?;
        }
        write!(f, "0")
    }
}

impl Serialize for Clause {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dimacs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Clause {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<i32>::deserialize(d)?;
        Clause::from_dimacs(&lits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: &[i32]) -> Clause {
        Clause::from_dimacs(l).unwrap()
    }

    #[test]
    fn construction_sorts_and_dedups() {
        assert_eq!(c(&[3, -1, 3]).to_dimacs(), vec![-1, 3]);
        assert_eq!(Clause::from_dimacs(&[2, -2]), Err(Error::Tautology(Var::new(2))));
    }

    #[test]
    fn resolve_example_pair() {
        let r = resolve(&c(&[-3, 4]), &c(&[1, 3]), Var::new(3)).unwrap();
        assert_eq!(r.to_dimacs(), vec![1, 4]);
    }

    #[test]
    fn unit_resolution_gives_empty_clause() {
        let r = resolve(&c(&[5]), &c(&[-5]), Var::new(5)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn resolve_rejects_double_clash_and_wrong_pivot() {
        assert_eq!(
            resolve(&c(&[1, 2]), &c(&[-1, -2]), Var::new(1)),
            Err(Error::NotResolvable(Var::new(1)))
        );
        assert_eq!(
            resolve(&c(&[1, 2]), &c(&[-1, 3]), Var::new(2)),
            Err(Error::NotResolvable(Var::new(2)))
        );
    }

    #[test]
    fn cofactor_of_clause() {
        let cl = c(&[1, -2, 3]);
        let q = Assignment::from_dimacs(&[-1, 2]).unwrap();
        assert_eq!(cl.cofactor(&q).unwrap().to_dimacs(), vec![3]);
        let q = Assignment::from_dimacs(&[-2]).unwrap();
        assert!(cl.cofactor(&q).is_none());
    }
}
