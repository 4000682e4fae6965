use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A set of state indices.
///
/// Stored zero-based; machine files and reports show them one-based
/// (`q1` is the initial state).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(BTreeSet<usize>);

impl StateSet {
    pub fn new() -> Self {
        Self(BTreeSet::new())
    }

    /// From zero-based indices.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().collect())
    }

    /// From one-based indices, as written in machine files.
    pub fn from_one_based(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        indices
            .into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::Invariant("state indices are 1-based".into()))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(Self)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self(self.0.difference(&other.0).copied().collect())
    }

    /// `{0, .., n-1} \ self`.
    pub fn complement(&self, n: usize) -> Self {
        Self((0..n).filter(|i| !self.0.contains(i)).collect())
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }

    pub fn check_range(&self, n: usize, what: &str) -> Result<()> {
        match self.max() {
            Some(m) if m >= n => Err(Error::Invariant(format!(
                "{what} state {} out of range 1..={n}",
                m + 1
            ))),
            _ => Ok(()),
        }
    }

    /// Pairs `(i, j)` of the product machine with `i in self`, `j in other`,
    /// indexed as `i * other_n + j`.
    pub fn product(&self, other: &Self, other_n: usize) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&i| other.0.iter().map(move |&j| i * other_n + j))
                .collect(),
        )
    }

    /// Adds `offset` to every index.
    pub fn shifted(&self, offset: usize) -> Self {
        Self(self.0.iter().map(|i| i + offset).collect())
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Outcome roles of the states of a restart machine. Nonhalting states are
/// whatever is left over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub accept: StateSet,
    pub reject: StateSet,
    pub restart: StateSet,
}

impl Partition {
    pub fn new(accept: StateSet, reject: StateSet, restart: StateSet) -> Self {
        Self { accept, reject, restart }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        self.accept.check_range(n, "accept")?;
        self.reject.check_range(n, "reject")?;
        self.restart.check_range(n, "restart")?;
        if !self.accept.is_disjoint(&self.reject)
            || !self.accept.is_disjoint(&self.restart)
            || !self.reject.is_disjoint(&self.restart)
        {
            return Err(Error::Invariant(
                "accept, reject and restart sets must be pairwise disjoint".into(),
            ));
        }
        Ok(())
    }

    pub fn halting(&self) -> StateSet {
        self.accept.union(&self.reject)
    }

    pub fn nonhalting(&self, n: usize) -> StateSet {
        self.accept.union(&self.reject).union(&self.restart).complement(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let s = StateSet::from_one_based([1, 3]).unwrap();
        assert!(s.contains(0) && s.contains(2));
        assert_eq!(s.to_string(), "1 3");
        assert!(StateSet::from_one_based([0]).is_err());
    }

    #[test]
    fn partition_checks() {
        let p = Partition::new(
            StateSet::from_indices([1]),
            StateSet::from_indices([2]),
            StateSet::from_indices([3]),
        );
        assert!(p.check(4).is_ok());
        assert_eq!(p.nonhalting(4), StateSet::from_indices([0]));
        assert!(p.check(3).is_err());
        let bad = Partition::new(
            StateSet::from_indices([1]),
            StateSet::from_indices([1]),
            StateSet::new(),
        );
        assert!(bad.check(4).is_err());
    }

    #[test]
    fn product_indexing() {
        let a = StateSet::from_indices([1]);
        let b = StateSet::from_indices([0, 2]);
        assert_eq!(a.product(&b, 3), StateSet::from_indices([3, 5]));
    }
}
