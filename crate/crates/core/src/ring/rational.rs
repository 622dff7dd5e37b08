use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational scalar. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    if !ok {
        return Err(Error::Parse(format!("not an exact rational: {s:?}")));
    }
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn lowest_terms() {
        let r = ratio(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
