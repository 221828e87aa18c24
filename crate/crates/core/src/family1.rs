//! Equations `x + by = cz` with `b > 1`: the eligibility bound on `c`, the
//! limiting density `D(b,c)`, the shifting transform that pushes an avoiding
//! set towards two intervals, and the explicit two-interval candidates for
//! the extremal sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::equation::{avoids, first_violation, Family, ThreeVarEquation};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::rational::{ratio, Rational};

/// `c (b - 1) > (b + 1) b^2`.
pub fn eligible(b: u64, c: u64) -> bool {
    b >= 2 && c * (b - 1) > (b + 1) * b * b
}

/// `(c - b - 1)(c^2 - b^2 + 1) / (c (c^2 - b(b + 1)))`.
pub fn density_d(b: u64, c: u64) -> Result<Rational> {
    let (b, c) = (b as i128, c as i128);
    let den = c * (c * c - b * (b + 1));
    if den == 0 {
        return Err(Error::DegenerateDenominator { b: b as u64, c: c as u64 });
    }
    Ok(ratio((c - b - 1) * (c * c - b * b + 1), den))
}

fn require_eligible(b: u64, c: u64) -> Result<()> {
    if eligible(b, c) {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!(
            "c = {c} does not satisfy c(b-1) > (b+1)b^2 for b = {b}"
        )))
    }
}

/// `l_1`, `r_2(s)` and `l_2(s)` for smallest element `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    pub l1: u64,
    pub r2: u64,
    pub l2: u64,
}

pub fn thresholds(n: u64, b: u64, c: u64, s: u64) -> Thresholds {
    let l1 = (b + 1) * n / c;
    let r2 = (l1 + b * s) / c;
    let l2 = (b + 1) * r2 / c;
    Thresholds { l1, r2, l2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Quantities {
    pub s_big: u64,
    pub s_prime: u64,
}

impl Quantities {
    /// `S <= s' <= S + 1`.
    pub fn within_bound(&self) -> bool {
        self.s_big <= self.s_prime && self.s_prime <= self.s_big + 1
    }
}

/// `S = floor((b+1)^2 n / (c (c^2 - b(b+1))))` and `s' = min{s : l_2(s) < s}`.
pub fn quantities_s(n: u64, b: u64, c: u64) -> Result<Quantities> {
    require_eligible(b, c)?;
    if n == 0 {
        return Err(Error::InvariantViolation("n must be at least 1".into()));
    }
    let s_big = ((b + 1) * (b + 1) * n) / (c * (c * c - b * (b + 1)));
    let s_prime = (1..=n)
        .find(|&s| thresholds(n, b, c, s).l2 < s)
        .ok_or(Error::ScanFailed { n })?;
    Ok(Quantities { s_big, s_prime })
}

fn require_family_one(eq: &ThreeVarEquation) -> Result<()> {
    if eq.family() == Family::FamilyI {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!("{eq} is not of the form x+by=cz with b>1")))
    }
}

fn require_avoiding(eq: &ThreeVarEquation, set: &IntSet) -> Result<()> {
    match first_violation(eq, set) {
        None => Ok(()),
        Some(sol) => Err(Error::NotAvoiding(sol.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Def1Trace {
    pub n: u64,
    pub s: u64,
    /// `r_1 = n, r_2, ..., r_{t+1}`.
    pub r: Vec<u64>,
    /// `l_1, ..., l_t`.
    pub l: Vec<u64>,
    pub t: usize,
    /// `A_0, ..., A_t`.
    pub stages: Vec<IntSet>,
    pub alpha: u64,
}

impl Def1Trace {
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(IntSet::len).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.sizes().windows(2).all(|w| w[0] <= w[1])
    }

    pub fn last(&self) -> &IntSet {
        self.stages.last().unwrap()
    }

    /// `[alpha, r_t]` together with `(l_j, r_j]` for `j < t`.
    pub fn closed_form(&self) -> IntSet {
        let t = self.t;
        let (alpha, rt) = (self.alpha, self.r[t - 1]);
        IntSet::from_predicate(self.n, |x| {
            (alpha <= x && x <= rt) || (0..t - 1).any(|j| self.l[j] < x && x <= self.r[j])
        })
    }
}

/// Repeatedly moves everything in `(r_{i+1}, l_i]` up into `(l_i, r_i]`
/// until the set is a union of intervals.
pub fn def1_transform(eq: &ThreeVarEquation, a: &IntSet) -> Result<Def1Trace> {
    require_family_one(eq)?;
    let s = a.min().ok_or(Error::EmptyInput)?;
    require_avoiding(eq, a)?;
    let (b, c, n) = (eq.b(), eq.c(), a.bound());
    let mut r = vec![n];
    let mut l = Vec::new();
    let mut stages = vec![a.clone()];
    loop {
        let ri = *r.last().unwrap();
        let li = (b + 1) * ri / c;
        let next = (li + b * s) / c;
        if next >= ri {
            return Err(Error::InvariantViolation(format!("r sequence stalls at {ri}")));
        }
        let prev = stages.last().unwrap();
        let stage = IntSet::from_predicate(n, |x| {
            (prev.contains(x) && !(next < x && x <= li)) || (li < x && x <= ri && x >= s)
        });
        if !avoids(eq, &stage) {
            return Err(Error::AvoidanceCheckFailed(format!("stage {} of the transform", stages.len())));
        }
        l.push(li);
        r.push(next);
        stages.push(stage);
        if next < s {
            break;
        }
    }
    let t = l.len();
    let alpha = (l[t - 1] + 1).max(s);
    Ok(Def1Trace { n, s, r, l, t, stages, alpha })
}

/// One of the two interval pieces of a candidate: `[lo, hi]` minus `removed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub variant: &'static str,
    pub lo: u64,
    pub hi: u64,
    pub removed: Vec<u64>,
}

impl Piece {
    fn new(variant: &'static str, lo: u64, hi: u64, removed: Vec<u64>) -> Option<Piece> {
        (lo <= hi && removed.iter().all(|&x| lo <= x && x <= hi)).then_some(Piece { variant, lo, hi, removed })
    }

    fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi && !self.removed.contains(&x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem25Candidate {
    pub s: u64,
    #[serde(rename = "I2")]
    pub i2: Piece,
    #[serde(rename = "I1")]
    pub i1: Piece,
    pub xi: BTreeMap<String, u64>,
    pub size: usize,
    #[serde(skip)]
    pub set: IntSet,
    pub avoids: bool,
}

/// The low piece `I_2` options for smallest element `s`, with `xi_1` where
/// it applies. The `"extended"` option is the one containing `r_2 + 1`.
fn low_pieces(s: u64, s_prime: u64, th: &Thresholds, b: u64, c: u64) -> Vec<(Piece, Option<u64>)> {
    let r2 = th.r2;
    let mut out = Vec::new();
    if s >= s_prime {
        out.extend(Piece::new("closed", s, r2, vec![]).map(|p| (p, None)));
        out.extend(Piece::new("extended", s, r2 + 1, vec![]).map(|p| (p, None)));
    } else {
        if r2 > 0 {
            out.extend(Piece::new("open_hi", s, r2 - 1, vec![]).map(|p| (p, None)));
        }
        let xi1 = ((b + 1) * r2).checked_sub(c * th.l2);
        if let Some(xi1) = xi1.filter(|x| (1..=b).contains(x) && *x <= r2) {
            out.extend(Piece::new("punctured", s, r2, vec![r2 - xi1]).map(|p| (p, Some(xi1))));
        }
    }
    out
}

/// The top piece `I_1` options, given whether `r_2 + 1` and `l_1` belong to
/// the candidate.
fn high_pieces(n: u64, s: u64, th: &Thresholds, b: u64, c: u64, has_r2_next: bool) -> Vec<(Piece, Vec<(&'static str, u64)>)> {
    let l1 = th.l1;
    let xi25 = (b + 1) * n - c * l1;
    let xi34 = (c * (th.r2 + 1)).checked_sub(b * s + l1);
    let mut out = Vec::new();
    if !has_r2_next {
        out.extend(Piece::new("open", l1 + 1, n, vec![]).map(|p| (p, vec![])));
        if xi25 <= n {
            out.extend(Piece::new("closed_minus_one", l1, n, vec![n - xi25]).map(|p| (p, vec![("xi2", xi25)])));
        }
    } else if let Some(xi34) = xi34 {
        if (1..=n).contains(&xi34) {
            out.extend(Piece::new("open_minus_one", l1 + 1, n, vec![l1 + xi34]).map(|p| (p, vec![("xi3", xi34)])));
        }
        if (1..b).contains(&xi34) && xi25 <= n {
            let mut removed = vec![l1 + xi34, n - xi25];
            removed.sort_unstable();
            removed.dedup();
            if removed.len() == 2 {
                out.extend(
                    Piece::new("closed_minus_two", l1, n, removed).map(|p| (p, vec![("xi4", xi34), ("xi5", xi25)])),
                );
            }
        }
    }
    out
}

/// Every two-piece candidate for smallest element `s` in the window
/// `[max(1, S - c), S + 2]` that avoids the equation, in order of `s` then
/// piece variants.
pub fn theorem25_candidates(n: u64, b: u64, c: u64) -> Result<Vec<Theorem25Candidate>> {
    require_eligible(b, c)?;
    let eq = ThreeVarEquation::new(1, b, c)?;
    let q = match quantities_s(n, b, c) {
        Ok(q) => q,
        Err(Error::ScanFailed { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    let lo = q.s_big.saturating_sub(c).max(1);
    for s in lo..=(q.s_big + 2).min(n) {
        let th = thresholds(n, b, c, s);
        for (i2, xi1) in low_pieces(s, q.s_prime, &th, b, c) {
            let has_r2_next = i2.variant == "extended";
            for (i1, xis) in high_pieces(n, s, &th, b, c, has_r2_next) {
                if i2.hi >= i1.lo {
                    continue;
                }
                let set = IntSet::from_predicate(n, |x| i2.contains(x) || i1.contains(x));
                if set.min() != Some(s) || !avoids(&eq, &set) {
                    continue;
                }
                let mut xi: BTreeMap<String, u64> = xis.iter().map(|&(k, v)| (k.to_string(), v)).collect();
                if let Some(v) = xi1 {
                    xi.insert("xi1".into(), v);
                }
                out.push(Theorem25Candidate {
                    s,
                    i2: i2.clone(),
                    i1,
                    xi,
                    size: set.len(),
                    set,
                    avoids: true,
                });
            }
        }
    }
    Ok(out)
}

/// The pairs `(x_i, y_i)`, `0 <= i <= d`, solving `x + by = cz` around
/// `cz / (b+1)`, as signed integers.
pub fn lemma26_pairs(b: u64, c: u64, z: u64, d: u64) -> Vec<(i64, i64)> {
    let f = (c * z / (b + 1)) as i64;
    (0..=d as i64)
        .map(|i| {
            let y = f + 1 + i;
            ((c * z) as i64 - b as i64 * y, y)
        })
        .collect()
}

/// `|I^d_z \ A|`, where `I^d_z = [x_d, y_d]` holds `d + 1` disjoint solution
/// pairs with `z`. At least `d + 1` whenever `z` is in the avoiding set `A`.
pub fn lemma26_deficiency(eq: &ThreeVarEquation, a: &IntSet, z: u64, d: u64) -> Result<usize> {
    require_family_one(eq)?;
    if !a.contains(z) {
        return Err(Error::InvariantViolation(format!("z = {z} is not in the set")));
    }
    require_avoiding(eq, a)?;
    let (lo, hi) = *lemma26_pairs(eq.b(), eq.c(), z, d).last().unwrap();
    let n = a.bound();
    if lo < 1 || hi > n as i64 {
        return Err(Error::IntervalOutOfRange { lo, hi, n });
    }
    Ok((lo as u64..=hi as u64).filter(|&x| !a.contains(x)).count())
}
