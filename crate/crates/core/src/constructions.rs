//! Explicit avoiding sets: residue classes, top intervals, multi-interval
//! sets, two-variable chain sets and the `A_b` sets. Every set is passed
//! through the checker before it is returned.

use num_integer::Integer;
use serde::Serialize;

use crate::equation::{avoids, LinearForm, ThreeVarEquation};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::rational::{ratio, Rational};
use crate::structured::{Interval, StructuredSet};

const FIXED_POINT_ROUNDS: usize = 64;

fn guard(form: &LinearForm, set: &IntSet, what: &str) -> Result<()> {
    let ok = match ThreeVarEquation::try_from(form) {
        Ok(eq) => avoids(&eq, set),
        Err(_) => form.avoided_by(set),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::AvoidanceCheckFailed(format!("{what} for {form}")))
    }
}

/// `{x in [1,n] : x = 1 (mod q)}`, which avoids the form whenever `q` does
/// not divide the coefficient sum.
pub fn residue_set(form: &LinearForm, q: u64, n: u64) -> Result<IntSet> {
    if q < 2 {
        return Err(Error::InvariantViolation(format!("q = {q}, expected q >= 2")));
    }
    if form.s() % q as i64 == 0 {
        return Err(Error::QDividesS { q, s: form.s() });
    }
    let set = IntSet::from_predicate(n, |x| x % q == 1 % q);
    guard(form, &set, "residue set")?;
    Ok(set)
}

/// `{x in [1,n] : s_plus x > s_minus n}` for the normalized form.
pub fn top_interval(form: &LinearForm, n: u64) -> Result<IntSet> {
    let form = form.normalize();
    let (sp, sm) = (form.s_plus() as u64, form.s_minus() as u64);
    let set = IntSet::from_predicate(n, |x| sp * x > sm * n);
    guard(&form, &set, "top interval")?;
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiInterval {
    pub k: usize,
    /// `n_1 = n > n_2 > ... > n_k`.
    pub sequence: Vec<u64>,
    pub xi: u64,
    pub set: StructuredSet,
}

/// `n_2, ..., n_k` for a given tail start `xi`, each chosen maximal under the
/// recurrence bound.
fn recurrence(sp: u64, sm: u64, a: u64, n: u64, k: usize, xi: u64) -> Vec<u64> {
    let mut seq = vec![n];
    for _ in 1..k {
        let prev = *seq.last().unwrap();
        seq.push((a * sm * prev + (sm - a) * xi * sp) / (sp * sp));
    }
    seq
}

/// The multi-interval set `(s_- n_j / s_+, n_j]` for `j < k` plus `[xi, n_k]`.
///
/// Without `xi` the canonical tail `xi = 1 + floor(s_- n_k / s_+)` is used.
/// Since `n_k` depends on `xi`, the canonical value is the largest fixed point
/// of `xi -> 1 + floor(s_- n_k(xi) / s_+)`, reached by iterating down from
/// `xi = n` (the map is monotone).
///
/// For `k >= 2` the normalized form must have a single positive coefficient;
/// otherwise sums of two top elements land back in the top interval.
pub fn multi_interval(form: &LinearForm, n: u64, k: usize, xi: Option<u64>) -> Result<MultiInterval> {
    if k == 0 || n == 0 {
        return Err(Error::InvariantViolation("k and n must be at least 1".into()));
    }
    let form = form.normalize();
    if k >= 2 && !supports_multi_interval(&form) {
        return Err(Error::InvariantViolation(format!(
            "{form} has more than one positive coefficient after normalization"
        )));
    }
    let (sp, sm, a) = (form.s_plus() as u64, form.s_minus() as u64, form.a_min() as u64);
    let (xi, seq) = match xi {
        Some(xi) => (xi, recurrence(sp, sm, a, n, k, xi)),
        None => {
            let mut xi = n;
            let mut settled = None;
            for _ in 0..FIXED_POINT_ROUNDS {
                let seq = recurrence(sp, sm, a, n, k, xi);
                let next = 1 + sm * seq[k - 1] / sp;
                if next == xi {
                    settled = Some(seq);
                    break;
                }
                xi = next;
            }
            match settled {
                Some(seq) => (xi, seq),
                None => return Err(Error::Infeasible(format!("no fixed point for xi after {FIXED_POINT_ROUNDS} rounds"))),
            }
        }
    };
    let nk = seq[k - 1];
    if xi == 0 || xi > nk || sm * nk >= xi * sp {
        return Err(Error::Infeasible(format!(
            "k = {k}: tail [{xi}, {nk}] violates s_- n_k < xi s_+ <= n_k s_+"
        )));
    }
    for w in seq.windows(2) {
        if sp * w[1] > sm * w[0] {
            return Err(Error::Infeasible(format!("k = {k}: intervals ending at {} and {} overlap", w[0], w[1])));
        }
    }
    let mut intervals: Vec<Interval> = seq[..k - 1].iter().map(|&nj| Interval::half_open(sm * nj / sp, nj)).collect();
    intervals.push(Interval::closed(xi, nk));
    let set = StructuredSet::from_intervals(n, intervals).map_err(|e| Error::Infeasible(e.to_string()))?;
    guard(&form, &set.materialize(), "multi-interval set")?;
    Ok(MultiInterval { k, sequence: seq, xi, set })
}

/// Whether `k >= 2` multi-interval sets are available for the form.
pub fn supports_multi_interval(form: &LinearForm) -> bool {
    form.normalize().coeffs().iter().filter(|&&a| a > 0).count() == 1
}

/// Largest canonical multi-interval set over `1 <= k <= k_max`; ties keep the
/// smaller `k`. Infeasible values of `k` are skipped, and only `k = 1` is
/// tried for forms without multi-interval sets.
pub fn best_multi_interval(form: &LinearForm, n: u64, k_max: usize) -> Result<MultiInterval> {
    let mut best = multi_interval(form, n, 1, None)?;
    let k_max = if supports_multi_interval(form) { k_max } else { 1 };
    for k in 2..=k_max {
        match multi_interval(form, n, k, None) {
            Ok(m) if m.set.size() > best.set.size() => best = m,
            Ok(_) | Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Orbits of `x -> (a/b) x` inside `[1,n]`, each listed from its least
/// element. Every integer in `[1,n]` lies on exactly one chain.
pub fn two_var_chains(a: u64, b: u64, n: u64) -> Result<Vec<Vec<u64>>> {
    if !(a > b && b >= 1) {
        return Err(Error::InvariantViolation(format!("need a > b >= 1, got a = {a}, b = {b}")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::InvariantViolation(format!("gcd({a}, {b}) != 1")));
    }
    let mut chains = Vec::new();
    for start in (1..=n).filter(|x| x % a != 0) {
        let mut chain = vec![start];
        let mut x = start;
        while x % b == 0 && x / b * a <= n {
            x = x / b * a;
            chain.push(x);
        }
        chains.push(chain);
    }
    Ok(chains)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoVarExtremal {
    pub size: usize,
    pub set: IntSet,
}

/// Largest subset of `[1,n]` with no `ax = by`: every other element of each
/// chain, starting from the least.
pub fn two_var_extremal(a: u64, b: u64, n: u64) -> Result<TwoVarExtremal> {
    let chains = two_var_chains(a, b, n)?;
    let size = chains.iter().map(|c| c.len().div_ceil(2)).sum();
    let set = IntSet::new(n, chains.iter().flat_map(|c| c.iter().step_by(2).copied()))?;
    if let Some(x) = set.iter().find(|&x| x % b == 0 && set.contains(x / b * a)) {
        return Err(Error::AvoidanceCheckFailed(format!(
            "{a}*{x} = {b}*{} inside the chain set",
            x / b * a
        )));
    }
    debug_assert_eq!(set.len(), size);
    Ok(TwoVarExtremal { size, set })
}

/// Exponent of `b` in `x`.
pub fn valuation(b: u64, mut x: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(b) {
        x /= b;
        v += 1;
    }
    v
}

pub fn in_ab(b: u64, x: u64) -> bool {
    valuation(b, x).is_multiple_of(3)
}

/// `b^2 / (b^2 + b + 1)`.
pub fn ab_density(b: u64) -> Rational {
    let b = b as i128;
    ratio(b * b, b * b + b + 1)
}

/// `A_b = {u b^(3i) : b does not divide u}` cut to `[1,n]`, with its
/// asymptotic density. Avoids `x + by = b^2 z`.
pub fn ab_set(b: u64, n: u64) -> Result<(IntSet, Rational)> {
    if b < 2 {
        return Err(Error::InvariantViolation(format!("b = {b}, expected b >= 2")));
    }
    let set = IntSet::from_predicate(n, |x| in_ab(b, x));
    let eq = ThreeVarEquation::new(1, b, b * b)?;
    if !avoids(&eq, &set) {
        return Err(Error::AvoidanceCheckFailed(format!("A_{b} at n = {n}")));
    }
    Ok((set, ab_density(b)))
}

/// `|A_b cap [1,n]|` without building the set.
pub fn ab_count(b: u64, n: u64) -> u64 {
    let mut total = 0;
    let mut p = 1u64;
    while p <= n {
        total += n / p - n / (p * b);
        p = match p.checked_mul(b * b * b) {
            Some(q) => q,
            None => break,
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{max_avoiding_two_var, SearchConfig};
    use proptest::prelude::*;

    fn form(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec()).unwrap()
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_set(&form(&[1, 2, -13]), 3, 10).unwrap().to_text(), "1,4,7,10");
        assert_eq!(residue_set(&form(&[1, 1, -3]), 2, 7).unwrap().to_text(), "1,3,5,7");
        assert_eq!(residue_set(&form(&[2, 2, -5]), 2, 4).unwrap().to_text(), "1,3");
        assert!(matches!(residue_set(&form(&[1, 2, -13]), 5, 10), Err(Error::QDividesS { q: 5, s: -10 })));
    }

    #[test]
    fn top_examples() {
        assert_eq!(top_interval(&form(&[2, 2, -5]), 10).unwrap().to_text(), "9,10");
        let t = top_interval(&form(&[1, 1, -4]), 100).unwrap();
        assert_eq!((t.len(), t.min()), (50, Some(51)));
        assert_eq!(top_interval(&form(&[1, 3, -2, -7]), 1).unwrap().to_text(), "1");
    }

    #[test]
    fn multi_examples() {
        let m = multi_interval(&form(&[1, 1, -4]), 100, 3, None).unwrap();
        assert_eq!(m.sequence, vec![100, 13, 2]);
        assert_eq!((m.xi, m.set.size()), (2, 58));
        let m = multi_interval(&form(&[2, 2, -5]), 100, 2, None).unwrap();
        assert_eq!(m.set.materialize(), IntSet::new(100, (38..=47).chain(81..=100)).unwrap());
        let one = multi_interval(&form(&[2, 2, -5]), 100, 1, None).unwrap();
        assert_eq!(one.set.materialize(), top_interval(&form(&[2, 2, -5]), 100).unwrap());
        assert!(matches!(multi_interval(&form(&[1, 1, -4]), 100, 2, Some(90)), Err(Error::Infeasible(_))));
        assert!(matches!(multi_interval(&form(&[1, 1, -1]), 100, 2, None), Err(Error::InvariantViolation(_))));
        assert_eq!(best_multi_interval(&form(&[1, 1, -1]), 100, 4).unwrap().k, 1);
    }

    #[test]
    fn best_multi_examples() {
        let b = best_multi_interval(&form(&[2, 2, -5]), 100, 6).unwrap();
        assert!(b.set.size() < 60);
        assert!(best_multi_interval(&form(&[1, 1, -4]), 100, 3).unwrap().set.size() >= 58);
        assert_eq!(best_multi_interval(&form(&[1, 1, -4]), 1, 3).unwrap().set.materialize().to_text(), "1");
    }

    #[test]
    fn two_var_examples() {
        let t = two_var_extremal(2, 1, 10).unwrap();
        assert_eq!((t.size, t.set.to_text().as_str()), (6, "1,3,4,5,7,9"));
        assert_eq!(two_var_extremal(2, 1, 1).unwrap().size, 1);
        let t = two_var_extremal(3, 2, 20).unwrap();
        let exact = max_avoiding_two_var(3, 2, 20, &SearchConfig::default()).unwrap();
        assert_eq!(t.size, exact.max_size);
        assert!(two_var_extremal(4, 2, 10).is_err());
        assert!(two_var_extremal(1, 2, 10).is_err());
    }

    #[test]
    fn ab_examples() {
        let (s, d) = ab_set(2, 20).unwrap();
        assert_eq!(s.to_text(), "1,3,5,7,8,9,11,13,15,17,19");
        assert_eq!(d, ratio(4, 7));
        assert_eq!(ab_set(2, 7).unwrap().0.to_text(), "1,3,5,7");
        let s3 = ab_set(3, 30).unwrap().0;
        let expect = IntSet::from_predicate(30, |x| x % 3 != 0 || x == 27);
        assert_eq!(s3, expect);
        for b in 2..6 {
            for n in [1, 50, 300] {
                assert_eq!(ab_count(b, n), ab_set(b, n).unwrap().0.len() as u64);
            }
        }
    }

    #[test]
    fn ab_density_limit() {
        for b in 2..=5 {
            let n = 1_000_000u64;
            let d = ab_density(b);
            let diff = (ab_count(b, n) as f64 / n as f64) - (*d.numer() as f64 / *d.denom() as f64);
            assert!(diff.abs() < 1e-3, "b = {b}: {diff}");
        }
    }

    proptest! {
        #[test]
        fn residue_lower_bound(q in 2u64..20, n in 1u64..300) {
            let f = form(&[1, 2, -13]);
            if f.s() % q as i64 != 0 {
                let s = residue_set(&f, q, n).unwrap();
                prop_assert!(s.len() as u64 >= n / q);
            }
        }

        #[test]
        fn multi_sets_avoid(n in 1u64..300, k in 1usize..6, pick in 0usize..4) {
            let f = [form(&[1, 1, -4]), form(&[2, 2, -5]), form(&[1, 2, -13]), form(&[-3, -1, -1, 7])][pick].clone();
            match multi_interval(&f, n, k, None) {
                Ok(m) => prop_assert!(f.avoided_by(&m.set.materialize())),
                Err(Error::Infeasible(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
