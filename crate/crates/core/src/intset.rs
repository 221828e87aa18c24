//! Finite subsets of `[1,n]`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of `[1, bound]`, kept sorted ascending without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSet {
    bound: u64,
    members: Vec<u64>,
}

impl IntSet {
    pub fn empty(bound: u64) -> Self {
        IntSet {
            bound,
            members: Vec::new(),
        }
    }

    /// Builds a set from arbitrary members; sorts and dedups them.
    pub fn new(bound: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut members: Vec<u64> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&x| x == 0 || x > bound) {
            return Err(Error::InvariantViolation(format!(
                "{bad} is outside [1, {bound}]"
            )));
        }
        Ok(IntSet { bound, members })
    }

    /// `{x in [1, bound] : keep(x)}`.
    pub fn from_predicate(bound: u64, keep: impl Fn(u64) -> bool) -> Self {
        IntSet {
            bound,
            members: (1..=bound).filter(|&x| keep(x)).collect(),
        }
    }

    pub(crate) fn from_sorted_unchecked(bound: u64, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&x| x >= 1 && x <= bound));
        IntSet { bound, members }
    }

    /// Parses the ascending comma-separated text form, e.g. `"1,3,5"`.
    /// The empty string is the empty set.
    pub fn parse(bound: u64, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(IntSet::empty(bound));
        }
        let members = text
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u64>().map_err(|_| {
                    Error::InvariantViolation(format!("bad set member {tok:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IntSet::new(bound, members)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<u64> {
        self.members.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.members.last().copied()
    }

    /// Dense membership table indexed by value, length `bound + 1`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut table = vec![false; self.bound as usize + 1];
        for &x in &self.members {
            table[x as usize] = true;
        }
        table
    }

    /// Same members, reinterpreted inside `[1, bound]`.
    pub fn with_bound(&self, bound: u64) -> Result<Self> {
        IntSet::new(bound, self.members.iter().copied())
    }

    pub fn difference(&self, other: &IntSet) -> Vec<u64> {
        self.iter().filter(|&x| !other.contains(x)).collect()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}
