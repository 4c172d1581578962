use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Clause, Lit, Var};
use crate::error::{Error, Result};

/// A partial map from variables to truth values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    bindings: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Builds an assignment making every literal true. Complementary
    /// literals are rejected.
    pub fn from_lits(lits: impl IntoIterator<Item = Lit>) -> Result<Assignment> {
        let mut a = Assignment::new();
        for l in lits {
            if a.value(l.var()) == Some(!l.is_positive()) {
                return Err(Error::precondition(format!(
                    "conflicting bindings for {}",
                    l.var()
                )));
            }
            a.insert(l.var(), l.is_positive());
        }
        Ok(a)
    }

    pub fn from_dimacs(lits: &[i32]) -> Result<Assignment> {
        if lits.contains(&0) {
            return Err(Error::precondition("0 is not a literal"));
        }
        Assignment::from_lits(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    /// Overwrites any previous binding of `v`.
    pub fn insert(&mut self, v: Var, value: bool) -> Option<bool> {
        self.bindings.insert(v, value)
    }

    pub fn remove(&mut self, v: Var) -> Option<bool> {
        self.bindings.remove(&v)
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.bindings.get(&v).copied()
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value(l.var()).map(|b| b == l.is_positive())
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bindings.keys().copied()
    }

    /// The literals made true by this assignment, in variable order.
    pub fn lits(&self) -> Vec<Lit> {
        self.iter().map(|(v, b)| v.lit(b)).collect()
    }

    /// `self ⊆ other`: every binding of `self` appears in `other`.
    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, b)| other.value(v) == Some(b))
    }

    pub fn is_consistent_with(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, b)| other.value(v).is_none_or(|o| o == b))
    }

    /// Union of two consistent assignments.
    pub fn union(&self, other: &Assignment) -> Result<Assignment> {
        if !self.is_consistent_with(other) {
            return Err(Error::precondition("assignments disagree"));
        }
        let mut out = self.clone();
        out.bindings.extend(other.iter());
        Ok(out)
    }

    /// Bindings of `self` restricted to the variables accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Var) -> bool) -> Assignment {
        Assignment {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep(**v))
                .map(|(&v, &b)| (v, b))
                .collect(),
        }
    }

    /// The longest clause falsified by this assignment.
    pub fn blocking_clause(&self) -> Clause {
        Clause::new(self.iter().map(|(v, b)| v.lit(!b))).expect("one literal per variable")
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lits()
            .iter()
            .map(|l| l.to_dimacs())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<i32>::deserialize(d)?;
        Assignment::from_dimacs(&lits).map_err(serde::de::Error::custom)
    }
}
