//! The `c = b^2` regime: the density gap between `A_b` and the two-interval
//! sets, exact checks that `A_b` is extremal, and explicit injections
//! `B \ A -> A \ B` for `b = 2, 3`.

use std::collections::HashSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constructions::{ab_density, ab_set, valuation};
use crate::equation::{first_violation, ThreeVarEquation};
use crate::error::{Error, Result};
use crate::exact::{max_avoiding, SearchConfig};
use crate::family1::density_d;
use crate::intset::IntSet;
use crate::rational::{serialize_ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    #[serde(rename = "dAb", serialize_with = "serialize_ratio")]
    pub d_ab: Rational,
    #[serde(rename = "D", serialize_with = "serialize_ratio")]
    pub d_val: Rational,
}

/// `(b^2 / (b^2 + b + 1), D(b, b^2))`; fails unless the first is larger.
pub fn counterexample_gap(b: u64) -> Result<Gap> {
    if b < 2 {
        return Err(Error::InvariantViolation(format!("b = {b}, expected b >= 2")));
    }
    let gap = Gap {
        d_ab: ab_density(b),
        d_val: density_d(b, b * b)?,
    };
    if gap.d_ab <= gap.d_val {
        return Err(Error::InvariantViolation(format!("no density gap at b = {b}")));
    }
    Ok(gap)
}

fn lb(b: u64) -> Result<ThreeVarEquation> {
    ThreeVarEquation::new(1, b, b * b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conj27Report {
    pub b: u64,
    pub n: u64,
    pub ab_size: usize,
    pub exact_size: usize,
    pub equal: bool,
}

/// Compares `|A_b cap [1,n]|` with the exact maximum for `x + by = b^2 z`.
pub fn verify_conj27(b: u64, n: u64, cfg: &SearchConfig) -> Result<Conj27Report> {
    let (ab, _) = ab_set(b, n)?;
    let exact = max_avoiding(&lb(b)?, n, cfg)?;
    Ok(Conj27Report {
        b,
        n,
        ab_size: ab.len(),
        exact_size: exact.max_size,
        equal: ab.len() == exact.max_size,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionCertificate {
    pub b: u64,
    pub n: u64,
    pub b_set: IntSet,
    pub a_set: IntSet,
    /// `(source, target)` pairs, sources ascending.
    pub mapping: Vec<(u64, u64)>,
}

impl InjectionCertificate {
    /// Checks that the mapping is total on `B \ A`, injective and lands in
    /// `A \ B`.
    pub fn verify(&self) -> Result<()> {
        let sources: Vec<u64> = self.b_set.difference(&self.a_set);
        let mapped: Vec<u64> = self.mapping.iter().map(|&(s, _)| s).collect();
        if mapped != sources {
            return Err(Error::CaseRuleUnmatched(format!(
                "mapping covers {mapped:?}, expected B \\ A = {sources:?}"
            )));
        }
        let mut seen = HashSet::new();
        for &(src, tgt) in &self.mapping {
            if !self.a_set.contains(tgt) || self.b_set.contains(tgt) {
                return Err(Error::CaseRuleUnmatched(format!("{src} -> {tgt} leaves A \\ B")));
            }
            if !seen.insert(tgt) {
                return Err(Error::CaseRuleUnmatched(format!("target {tgt} is hit twice")));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }
}

impl Serialize for InjectionCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InjectionCertificate", 5)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("B", self.b_set.members())?;
        st.serialize_field("mapping", &self.mapping)?;
        st.serialize_field("valid", &self.is_valid())?;
        st.end()
    }
}

fn image_b2(x: u64) -> Option<u64> {
    match valuation(2, x) % 3 {
        1 => Some(x / 2),
        2 => Some(x / 4 * 3),
        _ => None,
    }
}

fn image_b3(x: u64, m: impl Fn(u64) -> bool) -> Option<u64> {
    match valuation(3, x) % 3 {
        1 => {
            let y = x / 3;
            Some(if !m(y) { y } else { 2 * y })
        }
        2 => {
            let y = x / 9;
            let (b2, b3, b6, b12) = (m(2 * y), m(3 * y), m(6 * y), m(12 * y));
            if !b12 && !(b2 && b6) {
                Some(4 * y)
            } else if !b12 {
                Some(y)
            } else if !b3 && !b6 {
                Some(2 * y)
            } else if !b3 {
                Some(y)
            } else {
                Some(8 * y)
            }
        }
        _ => None,
    }
}

/// The injection `f : B \ A -> A \ B` with `A = A_b cap [1,n]`, built by the
/// first matching rule for each source.
pub fn injection_certificate(b: u64, set: &IntSet, n: u64) -> Result<InjectionCertificate> {
    if b != 2 && b != 3 {
        return Err(Error::InvariantViolation(format!("injections exist for b = 2, 3 only, got {b}")));
    }
    let set = set.with_bound(n)?;
    let eq = lb(b)?;
    if let Some(sol) = first_violation(&eq, &set) {
        return Err(Error::NotAvoiding(sol.to_string()));
    }
    let (a_set, _) = ab_set(b, n)?;
    let mut mapping = Vec::new();
    for x in set.difference(&a_set) {
        let target = match b {
            2 => image_b2(x),
            _ => image_b3(x, |v| set.contains(v)),
        };
        match target {
            Some(t) => mapping.push((x, t)),
            None => return Err(Error::CaseRuleUnmatched(format!("no rule for {x}"))),
        }
    }
    let cert = InjectionCertificate {
        b,
        n,
        b_set: set,
        a_set,
        mapping,
    };
    cert.verify()?;
    Ok(cert)
}
