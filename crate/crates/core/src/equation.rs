//! Equations, their solutions inside `[1,n]`, and the avoidance checker.
//!
//! Solutions are counted with the three variables ranging independently over
//! the set, repeats allowed. For `a + b != c` the constant triple is never a
//! solution, so no separate notion of "trivial" solution is needed.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// A homogeneous form `sum a_i x_i = 0` with at least one coefficient of each
/// sign, coprime coefficients and nonzero coefficient sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<i64>,
    s_plus: i64,
    s_minus: i64,
    a_min: i64,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.contains(&0) {
            return Err(Error::InvariantViolation(
                "coefficients must be nonzero".into(),
            ));
        }
        let g = coeffs.iter().fold(0i64, |g, &a| g.gcd(&a));
        if g != 1 {
            return Err(Error::InvariantViolation(format!(
                "gcd of coefficients is {g}, expected 1"
            )));
        }
        let s_plus: i64 = coeffs.iter().filter(|&&a| a > 0).sum();
        let s_minus: i64 = coeffs.iter().filter(|&&a| a < 0).map(|a| -a).sum();
        if s_plus == 0 || s_minus == 0 {
            return Err(Error::InvariantViolation(
                "single-signed form has no positive-integer solutions".into(),
            ));
        }
        if s_plus == s_minus {
            return Err(Error::InvariantViolation(
                "coefficient sum is zero (translation-invariant form)".into(),
            ));
        }
        let a_min = coeffs.iter().filter(|&&a| a < 0).map(|a| -a).min().unwrap();
        Ok(LinearForm {
            coeffs,
            s_plus,
            s_minus,
            a_min,
        })
    }

    /// Orients the form so that `s_plus > s_minus`. Idempotent.
    pub fn normalize(&self) -> LinearForm {
        if self.s_plus > self.s_minus {
            return self.clone();
        }
        LinearForm::new(self.coeffs.iter().map(|a| -a).collect())
            .expect("negation preserves validity")
    }

    pub fn is_normalized(&self) -> bool {
        self.s_plus > self.s_minus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn s_plus(&self) -> i64 {
        self.s_plus
    }

    pub fn s_minus(&self) -> i64 {
        self.s_minus
    }

    /// Coefficient sum `s_plus - s_minus`.
    pub fn s(&self) -> i64 {
        self.s_plus - self.s_minus
    }

    /// Smallest absolute value among the negative coefficients.
    pub fn a_min(&self) -> i64 {
        self.a_min
    }

    /// True iff no assignment of the variables to members of `set` (repeats
    /// allowed) satisfies the form.
    ///
    /// Works for any number of variables. The attainable values of the
    /// positive and negative halves are built as iterated sumsets (bit
    /// vectors, shift-or per member) and intersected.
    pub fn avoided_by(&self, set: &IntSet) -> bool {
        if set.is_empty() {
            return true;
        }
        let n = set.bound() as usize;
        let limit = (self.s_plus.max(self.s_minus) as usize) * n + 1;
        let words = limit.div_ceil(64);
        let reach = |weights: Vec<usize>| {
            let mut cur = vec![0u64; words];
            cur[0] = 1;
            for w in weights {
                let mut next = vec![0u64; words];
                for x in set.iter() {
                    shift_or(&mut next, &cur, w * x as usize);
                }
                cur = next;
            }
            cur
        };
        let p = reach(self.coeffs.iter().filter(|&&a| a > 0).map(|&a| a as usize).collect());
        let q = reach(self.coeffs.iter().filter(|&&a| a < 0).map(|&a| (-a) as usize).collect());
        p.iter().zip(&q).all(|(a, b)| a & b == 0)
    }
}

/// `dst |= src << by`, truncated to the length of `dst`.
fn shift_or(dst: &mut [u64], src: &[u64], by: usize) {
    let (words, bits) = (by / 64, by % 64);
    for i in (words..dst.len()).rev() {
        let j = i - words;
        let mut v = src[j] << bits;
        if bits > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bits);
        }
        dst[i] |= v;
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `x + by = cz` with `b > 1`.
    FamilyI,
    /// `b(x + y) = cz` with `gcd(b, c) = 1`, `b > 1`.
    FamilyII,
    Other,
}

/// `ax + by = cz` with positive coprime coefficients and `a + b != c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThreeVarEquation {
    a: u64,
    b: u64,
    c: u64,
    family: Family,
}

impl ThreeVarEquation {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvariantViolation(format!(
                "coefficients must be positive, got ({a},{b},{c})"
            )));
        }
        let g = a.gcd(&b).gcd(&c);
        if g != 1 {
            return Err(Error::InvariantViolation(format!(
                "gcd({a},{b},{c}) = {g}, expected 1"
            )));
        }
        if a + b == c {
            return Err(Error::InvariantViolation(format!(
                "{a}x+{b}y={c}z is translation-invariant (a+b=c)"
            )));
        }
        let family = if a == 1 && b > 1 {
            Family::FamilyI
        } else if a == b && b > 1 && b.gcd(&c) == 1 {
            Family::FamilyII
        } else {
            Family::Other
        };
        Ok(ThreeVarEquation { a, b, c, family })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn to_form(&self) -> LinearForm {
        LinearForm::new(vec![self.a as i64, self.b as i64, -(self.c as i64)])
            .expect("validated equation is a valid form")
    }

    pub fn is_solution(&self, x: u64, y: u64, z: u64) -> bool {
        self.a * x + self.b * y == self.c * z
    }

    /// `y` such that `(x, y, z)` is a solution, if it is a positive integer.
    fn solve_y(&self, x: u64, z: u64) -> Option<u64> {
        let rhs = self.c * z;
        let ax = self.a * x;
        if ax >= rhs {
            return None;
        }
        let rest = rhs - ax;
        rest.is_multiple_of(self.b).then(|| rest / self.b)
    }
}

impl TryFrom<&LinearForm> for ThreeVarEquation {
    type Error = Error;

    /// A three-variable form has one coefficient whose sign differs from the
    /// other two; that one becomes `c`.
    fn try_from(form: &LinearForm) -> Result<Self> {
        let k = form.coeffs();
        if k.len() != 3 {
            return Err(Error::InvariantViolation(format!(
                "form {form} does not have three variables"
            )));
        }
        let positives = k.iter().filter(|&&a| a > 0).count();
        let lone_sign_positive = positives == 1;
        let lone = k.iter().position(|&a| (a > 0) == lone_sign_positive).unwrap();
        let others: Vec<u64> = k
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != lone)
            .map(|(_, a)| a.unsigned_abs())
            .collect();
        ThreeVarEquation::new(others[0], others[1], k[lone].unsigned_abs())
    }
}

impl fmt::Display for ThreeVarEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = |k: u64| if k == 1 { String::new() } else { k.to_string() };
        write!(f, "{}x+{}y={}z", coef(self.a), coef(self.b), coef(self.c))
    }
}

/// Parses `"[k]x + [k]y = [k]z"` (coefficients default to 1, an optional `*`
/// may separate coefficient and variable) or a coefficient triple `"a,b,c"`.
pub fn parse_equation(text: &str) -> Result<ThreeVarEquation> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let malformed = || Error::MalformedEquation(text.to_string());
    if !compact.contains('=') {
        let parts: Vec<&str> = compact.split(',').collect();
        if parts.len() != 3 {
            return Err(malformed());
        }
        let mut k = [0u64; 3];
        for (slot, p) in k.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| malformed())?;
        }
        return ThreeVarEquation::new(k[0], k[1], k[2]);
    }
    let (lhs, rhs) = compact.split_once('=').ok_or_else(malformed)?;
    let term = |t: &str| -> Result<(u64, char)> {
        let var = t.chars().last().ok_or_else(malformed)?;
        let digits = t[..t.len() - var.len_utf8()].trim_end_matches('*');
        let k = if digits.is_empty() {
            1
        } else {
            digits.parse().map_err(|_| malformed())?
        };
        Ok((k, var))
    };
    let left: Vec<(u64, char)> = lhs.split('+').map(term).collect::<Result<_>>()?;
    let (c, zvar) = term(rhs)?;
    let find = |v: char| left.iter().find(|(_, w)| *w == v).map(|(k, _)| *k);
    match (left.len(), find('x'), find('y'), zvar) {
        (2, Some(a), Some(b), 'z') => ThreeVarEquation::new(a, b, c),
        _ => Err(malformed()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Solution {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// All `(x, y, z)` in `[1,n]^3` solving `eq`, ordered by `z`, then `x`.
pub fn enumerate_solutions(eq: &ThreeVarEquation, n: u64) -> Vec<Solution> {
    let mut out = Vec::new();
    for z in 1..=n {
        for x in 1..=n {
            if eq.a * x >= eq.c * z {
                break;
            }
            if let Some(y) = eq.solve_y(x, z) {
                if y <= n {
                    out.push(Solution { x, y, z });
                }
            }
        }
    }
    out
}

/// `None` if `set` avoids `eq`, otherwise the first violation in the order of
/// [`enumerate_solutions`].
pub fn first_violation(eq: &ThreeVarEquation, set: &IntSet) -> Option<Solution> {
    let member = set.indicator();
    let n = set.bound();
    for z in set.iter() {
        for x in set.iter() {
            if eq.a * x >= eq.c * z {
                break;
            }
            if let Some(y) = eq.solve_y(x, z) {
                if y <= n && member[y as usize] {
                    return Some(Solution { x, y, z });
                }
            }
        }
    }
    None
}

/// True iff no triple of members (repeats allowed) solves `eq`.
pub fn avoids(eq: &ThreeVarEquation, set: &IntSet) -> bool {
    first_violation(eq, set).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eq(a: u64, b: u64, c: u64) -> ThreeVarEquation {
        ThreeVarEquation::new(a, b, c).unwrap()
    }

    fn sol(x: u64, y: u64, z: u64) -> Solution {
        Solution { x, y, z }
    }

    #[test]
    fn parse_grammar() {
        let e = parse_equation("x+2y=4z").unwrap();
        assert_eq!((e.a(), e.b(), e.c(), e.family()), (1, 2, 4, Family::FamilyI));
        let e = parse_equation("2x + 2y = 5z").unwrap();
        assert_eq!((e.a(), e.b(), e.c(), e.family()), (2, 2, 5, Family::FamilyII));
        let e = parse_equation("1,2,13").unwrap();
        assert_eq!(e.to_string(), "x+2y=13z");
        assert_eq!(parse_equation("3*x+y=2z").unwrap().to_string(), "3x+y=2z");
        assert_eq!(parse_equation("2y+x=4z").unwrap().to_string(), "x+2y=4z");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_equation("x+y=2z"), Err(Error::InvariantViolation(_))));
        assert!(matches!(parse_equation("2x+2y=4z"), Err(Error::InvariantViolation(_))));
        assert!(matches!(parse_equation("0,1,3"), Err(Error::InvariantViolation(_))));
        for bad in ["", "x+y", "x+y=z+w", "x+2q=4z", "ax+y=3z", "1,2", "x+x=3z", "x+y=3y"] {
            assert!(
                matches!(parse_equation(bad), Err(Error::MalformedEquation(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn solutions_small() {
        assert_eq!(
            enumerate_solutions(&eq(1, 2, 4), 5),
            vec![sol(2, 1, 1), sol(2, 3, 2), sol(4, 2, 2), sol(2, 5, 3), sol(4, 4, 3)]
        );
        assert!(enumerate_solutions(&eq(1, 2, 4), 1).is_empty());
        let mut got = enumerate_solutions(&eq(2, 2, 5), 5);
        got.sort();
        let mut want = vec![sol(2, 3, 2), sol(3, 2, 2), sol(1, 4, 2), sol(4, 1, 2), sol(5, 5, 4)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn avoidance_examples() {
        let e = eq(1, 2, 4);
        assert!(avoids(&e, &IntSet::new(5, [1, 3, 5]).unwrap()));
        assert_eq!(first_violation(&e, &IntSet::new(2, [1, 2]).unwrap()), Some(sol(2, 1, 1)));
        assert!(avoids(&eq(5, 3, 1), &IntSet::empty(10)));
    }

    #[test]
    fn normalize_examples() {
        let f = LinearForm::new(vec![2, 2, -5]).unwrap().normalize();
        assert_eq!(f.coeffs(), &[-2, -2, 5]);
        assert_eq!((f.s_plus(), f.s_minus(), f.a_min()), (5, 4, 2));
        let f = LinearForm::new(vec![1, 2, -13]).unwrap().normalize();
        assert_eq!(f.coeffs(), &[-1, -2, 13]);
        assert_eq!((f.s_plus(), f.s_minus(), f.a_min()), (13, 3, 1));
        let f = LinearForm::new(vec![1, 1, -1]).unwrap().normalize();
        assert_eq!(f.coeffs(), &[1, 1, -1]);
        assert_eq!((f.s_plus(), f.s_minus(), f.a_min()), (2, 1, 1));
    }

    #[test]
    fn form_errors() {
        assert!(LinearForm::new(vec![2, 4, -6]).is_err());
        assert!(LinearForm::new(vec![1, 1, -2]).is_err());
        assert!(LinearForm::new(vec![1, 2, 3]).is_err());
        assert!(LinearForm::new(vec![1, 0, -3]).is_err());
    }

    #[test]
    fn form_round_trip() {
        for e in [eq(1, 2, 4), eq(2, 2, 5), eq(3, 1, 2), eq(5, 3, 1)] {
            assert_eq!(ThreeVarEquation::try_from(&e.to_form()).unwrap(), e);
            assert_eq!(ThreeVarEquation::try_from(&e.to_form().normalize()).unwrap(), e);
        }
    }

    #[test]
    fn swap_symmetry_when_a_equals_b() {
        let e = eq(3, 3, 7);
        let sols = enumerate_solutions(&e, 40);
        for s in &sols {
            assert!(sols.contains(&sol(s.y, s.x, s.z)));
        }
    }

    fn equations() -> impl Strategy<Value = ThreeVarEquation> {
        (1u64..6, 1u64..6, 1u64..14)
            .prop_filter_map("valid", |(a, b, c)| ThreeVarEquation::new(a, b, c).ok())
    }

    proptest! {
        #[test]
        fn normalize_idempotent(raw in proptest::collection::vec(-9i64..10, 2..6)) {
            if let Ok(f) = LinearForm::new(raw) {
                let once = f.normalize();
                prop_assert!(once.is_normalized());
                prop_assert_eq!(once.normalize(), once.clone());
                prop_assert_eq!(once.s(), once.s_plus() - once.s_minus());
            }
        }

        #[test]
        fn solution_count_monotone(e in equations(), n in 1u64..40) {
            prop_assert!(enumerate_solutions(&e, n).len() <= enumerate_solutions(&e, n + 1).len());
        }

        #[test]
        fn checker_agrees_with_enumerator(e in equations(), n in 1u64..=20, mask in any::<u32>()) {
            let set = IntSet::from_predicate(n, |x| mask >> (x - 1) & 1 == 1);
            let inside: Vec<Solution> = enumerate_solutions(&e, n)
                .into_iter()
                .filter(|s| set.contains(s.x) && set.contains(s.y) && set.contains(s.z))
                .collect();
            prop_assert_eq!(first_violation(&e, &set), inside.first().copied());
            prop_assert_eq!(e.to_form().avoided_by(&set), inside.is_empty());
        }
    }
}
