use num_rational::Ratio;

/// Exact rational used for every density in the crate.
pub type Rational = Ratio<i128>;

/// `"num/den"`, always with an explicit denominator (`1/1`, `0/1`).
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde helper writing a [`Rational`] as its `"num/den"` string.
pub fn serialize_ratio<S: serde::Serializer>(r: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&ratio_string(r))
}

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn always_has_denominator() {
        assert_eq!(ratio_string(&ratio(6, 10)), "3/5");
        assert_eq!(ratio_string(&ratio(4, 4)), "1/1");
        assert_eq!(ratio_string(&ratio(0, 7)), "0/1");
    }
}
