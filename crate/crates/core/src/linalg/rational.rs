//! Text form of exact rationals: always `"p/q"` with `q > 0` and `gcd(p, q) = 1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or an integer `"p"`. Decimal and exponent notation is
/// rejected so that no floating value is silently rounded into the exact path.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    if den.is_negative() {
        return Ok(BigRational::new(-num, -den));
    }
    Ok(BigRational::new(num, den))
}

/// Twelve significant digits, scientific notation.
pub fn format_residual(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("6/-4").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational(" 7 ").unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(format_rational(&parse_rational("-10/4").unwrap()), "-5/2");
    }

    #[test]
    fn rejects_floats() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn residual_has_twelve_significant_digits() {
        assert_eq!(format_residual(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_residual(0.0), "0.00000000000e0");
    }
}
