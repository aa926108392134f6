//! Arbitrary-precision rational numbers.
//!
//! The coefficient field for all exact computation is `num-rational`'s
//! `BigRational`, which keeps values reduced to lowest terms with a
//! positive denominator. This module adds the string formats the rest of
//! the crate relies on: `"p/q"` (the native form) and plain decimal
//! strings such as `"-0.25"`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty string")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses either a `p/q` fraction or a decimal string (`"3"`, `"-0.25"`).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
        let q: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    match s.split_once('.') {
        None => {
            let p: BigInt = s
                .parse()
                .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
            Ok(Rational::from_integer(p))
        }
        Some((int_part, frac_part)) => {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseRationalError::Invalid(s.to_string()));
            }
            let negative = int_part.trim_start().starts_with('-');
            let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
                BigInt::zero()
            } else {
                int_part
                    .parse()
                    .map_err(|_| ParseRationalError::Invalid(s.to_string()))?
            };
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            let frac: BigInt = frac_part
                .parse()
                .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
            let signed_frac = if negative { -frac } else { frac };
            Ok(Rational::new(int_part * &scale + signed_frac, scale))
        }
    }
}

/// Renders `r` as a decimal string with up to `max_digits` fractional
/// digits, trimming trailing zeros. Exact when the denominator divides a
/// power of ten within range; rounded to nearest otherwise.
pub fn decimal_string(r: &Rational, max_digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(max_digits as u32);
    // round half away from zero
    let scaled = (abs.numer() * &scale * 2i32 + abs.denom()) / (abs.denom() * 2i32);
    let int_part = &scaled / &scale;
    let mut frac_part = (&scaled % &scale).to_string();
    while frac_part.len() < max_digits {
        frac_part.insert(0, '0');
    }
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Exact conversion to `f64` when possible, nearest otherwise.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// True if `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Square root of a non-negative integer `n`, scaled: returns the exact
/// floor of `sqrt(n) * 2^bits` as a big integer.
pub fn isqrt_scaled(n: u64, bits: u32) -> BigInt {
    let scaled: BigInt = BigInt::from(n) << (2 * bits);
    scaled.sqrt()
}

/// Rational approximation of sqrt(3) accurate to better than 2^-bits.
pub fn sqrt3(bits: u32) -> Rational {
    let num = isqrt_scaled(3, bits + 2);
    Rational::new(num, BigInt::one() << (bits + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_fraction_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational(" 7 / 2 ").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("5").unwrap(), rat(5));
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("12.000").unwrap(), rat(12));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a.b").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&ratio(1, 2), 6), "0.5");
        assert_eq!(decimal_string(&ratio(-9, 4), 6), "-2.25");
        assert_eq!(decimal_string(&rat(429), 6), "429");
        assert_eq!(decimal_string(&ratio(1, 3), 4), "0.3333");
    }

    #[test]
    fn sqrt3_accuracy() {
        let approx = to_f64(&sqrt3(60));
        assert!((approx - 3f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn decimal_round_trip(p in -10_000i64..10_000, a in 0u32..6, b in 0u32..6) {
            // denominators of the form 2^a 5^b render exactly
            let r = Rational::new(BigInt::from(p), BigInt::from(2u32).pow(a) * BigInt::from(5u32).pow(b));
            let s = decimal_string(&r, 20);
            prop_assert_eq!(parse_rational(&s).unwrap(), r);
        }

        #[test]
        fn fraction_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let r = ratio(p, q);
            prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }
}
