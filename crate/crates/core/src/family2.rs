//! Closed-form extremal sets for `b(x + y) = cz`, `b > 1`, `gcd(b, c) = 1`.

use num_integer::Integer;
use serde::Serialize;

use crate::equation::{avoids, ThreeVarEquation};
use crate::error::{Error, Result};
use crate::structured::{Interval, StructuredSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family2Case {
    /// `c > 2b`: a top interval above `2bn/c` plus the non-multiples of `b`
    /// below it.
    #[serde(rename = "i")]
    Hybrid,
    /// `2 <= c < 2b`: the non-multiples of `b`.
    #[serde(rename = "ii")]
    Residue,
    /// `c = 1`: the interval `(n/2b, n]`.
    #[serde(rename = "iii")]
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family2Extremal {
    pub b: u64,
    pub c: u64,
    pub n: u64,
    pub case: Family2Case,
    pub set: StructuredSet,
    pub size: u64,
}

pub fn family2_case(b: u64, c: u64) -> Result<Family2Case> {
    if b < 2 || c == 0 || b.gcd(&c) != 1 {
        return Err(Error::InvariantViolation(format!(
            "need b >= 2, c >= 1 and gcd(b, c) = 1, got b = {b}, c = {c}"
        )));
    }
    match c {
        1 => Ok(Family2Case::Top),
        c if c > 2 * b => Ok(Family2Case::Hybrid),
        c if c >= 2 && c < 2 * b => Ok(Family2Case::Residue),
        _ => Err(Error::InvariantViolation(format!("c = {c} matches no case for b = {b}"))),
    }
}

/// Closed-form size of the extremal set.
pub fn family2_size(b: u64, c: u64, n: u64) -> Result<u64> {
    Ok(match family2_case(b, c)? {
        Family2Case::Hybrid => n - 2 * n / c,
        Family2Case::Residue => n - n / b,
        Family2Case::Top => n - n / (2 * b),
    })
}

/// A maximum subset of `[1,n]` avoiding `b(x + y) = cz`.
pub fn family2_extremal(b: u64, c: u64, n: u64) -> Result<Family2Extremal> {
    let case = family2_case(b, c)?;
    if n == 0 {
        return Err(Error::InvariantViolation("n must be at least 1".into()));
    }
    let multiples = |hi: u64| (1..=hi / b).map(|k| k * b).collect::<Vec<u64>>();
    let set = match case {
        Family2Case::Hybrid => {
            let cut = 2 * b * n / c;
            StructuredSet::new(
                n,
                vec![Interval::closed(1, cut), Interval::half_open(cut, n)],
                multiples(cut),
                vec![],
            )?
        }
        Family2Case::Residue => StructuredSet::new(n, vec![Interval::closed(1, n)], multiples(n), vec![])?,
        Family2Case::Top => StructuredSet::from_intervals(n, vec![Interval::half_open(n / (2 * b), n)])?,
    };
    let size = family2_size(b, c, n)?;
    if set.size() != size {
        return Err(Error::InvariantViolation(format!(
            "set has {} elements, closed form gives {size}",
            set.size()
        )));
    }
    let eq = ThreeVarEquation::new(b, b, c)?;
    if !avoids(&eq, &set.materialize()) {
        return Err(Error::AvoidanceCheckFailed(format!("{eq} at n = {n}")));
    }
    Ok(Family2Extremal { b, c, n, case, set, size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e = family2_extremal(2, 5, 10).unwrap();
        assert_eq!((e.case, e.size), (Family2Case::Hybrid, 6));
        assert_eq!(e.set.materialize().to_text(), "1,3,5,7,9,10");
        let e = family2_extremal(3, 2, 9).unwrap();
        assert_eq!((e.case, e.set.materialize().to_text().as_str()), (Family2Case::Residue, "1,2,4,5,7,8"));
        let e = family2_extremal(2, 1, 8).unwrap();
        assert_eq!((e.case, e.set.materialize().to_text().as_str()), (Family2Case::Top, "3,4,5,6,7,8"));
    }

    #[test]
    fn rejects() {
        for (b, c) in [(1, 5), (2, 4), (2, 0), (3, 6)] {
            assert!(matches!(family2_extremal(b, c, 10), Err(Error::InvariantViolation(_))));
        }
    }

    #[test]
    fn json_case_tag() {
        let v = serde_json::to_value(family2_extremal(2, 5, 10).unwrap()).unwrap();
        assert_eq!(v["case"], "i");
        assert_eq!(v["set"]["size"], 6);
    }

    #[test]
    fn all_outputs_avoid() {
        for b in 2..6 {
            for c in (1..20).filter(|c| b.gcd(c) == 1) {
                for n in [1, 2, 7, 30, 101] {
                    family2_extremal(b, c, n).unwrap();
                }
            }
        }
    }
}
