//! Sets described as unions of intervals with a few singletons patched in
//! or out.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// Integers in `[lo, hi]`, or in `(lo, hi]` when `closed_lo` is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
    pub closed_lo: bool,
}

impl Interval {
    pub fn closed(lo: u64, hi: u64) -> Self {
        Interval { lo, hi, closed_lo: true }
    }

    /// `(lo, hi]`.
    pub fn half_open(lo: u64, hi: u64) -> Self {
        Interval { lo, hi, closed_lo: false }
    }

    /// Least member, `None` when empty.
    pub fn first(&self) -> Option<u64> {
        let first = if self.closed_lo { self.lo } else { self.lo + 1 };
        (first <= self.hi).then_some(first)
    }

    pub fn len(&self) -> u64 {
        self.first().map_or(0, |f| self.hi - f + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.first().is_none()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.first().is_some_and(|f| f <= x && x <= self.hi)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        let (lo, hi) = match self.first() {
            Some(f) => (f, self.hi),
            None => (1, 0),
        };
        lo..=hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredSet {
    bound: u64,
    intervals: Vec<Interval>,
    removed: Vec<u64>,
    added: Vec<u64>,
}

impl StructuredSet {
    /// Validates and normalizes: empty intervals are dropped, intervals are
    /// sorted, singletons sorted and deduplicated.
    pub fn new(bound: u64, intervals: Vec<Interval>, removed: Vec<u64>, added: Vec<u64>) -> Result<Self> {
        let mut intervals: Vec<Interval> = intervals.into_iter().filter(|iv| !iv.is_empty()).collect();
        intervals.sort_by_key(|iv| iv.first());
        for iv in &intervals {
            let first = iv.first().unwrap();
            if first < 1 || iv.hi > bound {
                return Err(Error::InvariantViolation(format!(
                    "interval [{first}, {}] leaves [1, {bound}]",
                    iv.hi
                )));
            }
        }
        if let Some(w) = intervals.windows(2).find(|w| w[1].first().unwrap() <= w[0].hi) {
            return Err(Error::InvariantViolation(format!(
                "intervals ending at {} and {} overlap",
                w[0].hi, w[1].hi
            )));
        }
        let sorted = |mut v: Vec<u64>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        let removed = sorted(removed);
        let added = sorted(added);
        let covered = |x: u64| intervals.iter().any(|iv| iv.contains(x));
        if let Some(x) = removed.iter().find(|&&x| !covered(x)) {
            return Err(Error::InvariantViolation(format!("removed {x} is not in any interval")));
        }
        if let Some(x) = added.iter().find(|&&x| covered(x) || x < 1 || x > bound) {
            return Err(Error::InvariantViolation(format!(
                "added {x} overlaps an interval or leaves [1, {bound}]"
            )));
        }
        Ok(StructuredSet {
            bound,
            intervals,
            removed,
            added,
        })
    }

    pub fn from_intervals(bound: u64, intervals: Vec<Interval>) -> Result<Self> {
        Self::new(bound, intervals, Vec::new(), Vec::new())
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn removed(&self) -> &[u64] {
        &self.removed
    }

    pub fn added(&self) -> &[u64] {
        &self.added
    }

    pub fn size(&self) -> u64 {
        let spans: u64 = self.intervals.iter().map(Interval::len).sum();
        spans - self.removed.len() as u64 + self.added.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        if self.added.binary_search(&x).is_ok() {
            return true;
        }
        self.intervals.iter().any(|iv| iv.contains(x)) && self.removed.binary_search(&x).is_err()
    }

    pub fn materialize(&self) -> IntSet {
        let mut members: Vec<u64> = self
            .intervals
            .iter()
            .flat_map(Interval::iter)
            .filter(|x| self.removed.binary_search(x).is_err())
            .chain(self.added.iter().copied())
            .collect();
        members.sort_unstable();
        IntSet::from_sorted_unchecked(self.bound, members)
    }
}

impl Serialize for StructuredSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("StructuredSet", 4)?;
        st.serialize_field("intervals", &self.intervals)?;
        st.serialize_field("removed", &self.removed)?;
        st.serialize_field("added", &self.added)?;
        st.serialize_field("size", &self.size())?;
        st.end()
    }
}
