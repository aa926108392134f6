//! Exact arithmetic in the quadratic field generated by a primitive sixth
//! root of unity.
//!
//! Elements are written `a + b*t` with rational `a`, `b`, where `t`
//! satisfies the minimal polynomial `t^2 = t - 1`. Numerically
//! `t = exp(i*pi/3)`, so `t^6 = 1`, `t^3 = -1` and `t + 1/t = 1`. The
//! degree-2 relation keeps every reduction closed-form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{self, parse_rational, rat, Rational};

/// Element `a + b*t` of Q(t), `t^2 = t - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloQ6 {
    a: Rational,
    b: Rational,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid cyclotomic literal {0:?}")]
    Parse(String),
}

impl CycloQ6 {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycloQ6 { a, b }
    }

    /// The generator `t = exp(i*pi/3)`.
    pub fn tau() -> Self {
        CycloQ6::new(rat(0), rat(1))
    }

    /// `t^k` for any integer `k` (period 6).
    pub fn tau_pow(k: i64) -> Self {
        match k.rem_euclid(6) {
            0 => CycloQ6::new(rat(1), rat(0)),
            1 => CycloQ6::new(rat(0), rat(1)),
            2 => CycloQ6::new(rat(-1), rat(1)),
            3 => CycloQ6::new(rat(-1), rat(0)),
            4 => CycloQ6::new(rat(0), rat(-1)),
            _ => CycloQ6::new(rat(1), rat(-1)),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloQ6::new(r, rat(0))
    }

    pub fn from_integer(n: i64) -> Self {
        CycloQ6::from_rational(rat(n))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn tau_part(&self) -> &Rational {
        &self.b
    }

    /// True if the element lies in Q (no `t` component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm `a^2 + ab + b^2`; zero only for the zero element.
    fn norm(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    /// Exact multiplicative inverse. `(a+bt)^-1 = (a+b-bt)/(a^2+ab+b^2)`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let n = self.norm();
        Ok(CycloQ6::new((&self.a + &self.b) / &n, -&self.b / &n))
    }

    /// `self^k` for any integer `k`; errors on `0^k` with `k < 0`.
    pub fn pow(&self, k: i64) -> Result<Self, CycloError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = CycloQ6::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * sq.clone();
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.clone() * sq;
            }
        }
        Ok(acc)
    }

    /// Complex embedding with `t = exp(i*pi/3)`.
    ///
    /// sqrt(3) is first approximated in exact rational arithmetic to
    /// `precision_bits` (the stated error bound `2^(-precision+2)` is
    /// therefore limited by the f64 return type beyond ~50 bits).
    pub fn eval_numeric(&self, precision_bits: u32) -> Complex64 {
        let bits = precision_bits.max(8);
        let s3 = rational::sqrt3(bits);
        let re = &self.a + &self.b / rat(2);
        let im = &self.b * s3 / rat(2);
        Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
    }

    /// Decimal rendering of the complex embedding, `digits` fractional
    /// digits per component. Used for high-precision output.
    pub fn eval_decimal(&self, digits: usize) -> (String, String) {
        let bits = (digits as u32 + 2) * 4 + 16;
        let s3 = rational::sqrt3(bits);
        let re = &self.a + &self.b / rat(2);
        let im = &self.b * s3 / rat(2);
        (
            rational::decimal_string(&re, digits),
            rational::decimal_string(&im, digits),
        )
    }
}

impl Zero for CycloQ6 {
    fn zero() -> Self {
        CycloQ6::new(rat(0), rat(0))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for CycloQ6 {
    fn one() -> Self {
        CycloQ6::new(rat(1), rat(0))
    }
}

impl Add for CycloQ6 {
    type Output = CycloQ6;
    fn add(self, rhs: CycloQ6) -> CycloQ6 {
        CycloQ6::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for CycloQ6 {
    type Output = CycloQ6;
    fn sub(self, rhs: CycloQ6) -> CycloQ6 {
        CycloQ6::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for CycloQ6 {
    type Output = CycloQ6;
    fn neg(self) -> CycloQ6 {
        CycloQ6::new(-self.a, -self.b)
    }
}

impl Mul for CycloQ6 {
    type Output = CycloQ6;
    // (a1 + b1 t)(a2 + b2 t) with t^2 = t - 1
    fn mul(self, rhs: CycloQ6) -> CycloQ6 {
        let bb = &self.b * &rhs.b;
        let a = &self.a * &rhs.a - &bb;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + bb;
        CycloQ6::new(a, b)
    }
}

impl Div for CycloQ6 {
    type Output = CycloQ6;
    fn div(self, rhs: CycloQ6) -> CycloQ6 {
        self * rhs.inv().expect("division by zero in CycloQ6")
    }
}

impl fmt::Display for CycloQ6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let tau_term = if self.b.is_one() {
            "t".to_string()
        } else if self.b == rat(-1) {
            "-t".to_string()
        } else {
            format!("{}*t", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{tau_term}")
        } else if tau_term.starts_with('-') {
            write!(f, "{}{}", self.a, tau_term)
        } else {
            write!(f, "{}+{}", self.a, tau_term)
        }
    }
}

impl fmt::Debug for CycloQ6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CycloQ6 {
    type Err = CycloError;

    /// Parses the `a+b*t` form: `"1/2+3*t"`, `"-t"`, `"2"`, `"1-2*t"`.
    fn from_str(s: &str) -> Result<Self, CycloError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(CycloError::Parse(s.to_string()));
        }
        // split at the last top-level +/- that is not a leading sign
        let bytes = compact.as_bytes();
        let mut split_at = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                split_at = Some(i);
                break;
            }
        }
        let parse_term = |term: &str| -> Result<(bool, Rational), CycloError> {
            // returns (is_tau_term, coefficient)
            if let Some(head) = term.strip_suffix("*t") {
                Ok((true, parse_rational(head).map_err(|_| CycloError::Parse(s.to_string()))?))
            } else if let Some(head) = term.strip_suffix('t') {
                let coeff = match head {
                    "" | "+" => rat(1),
                    "-" => rat(-1),
                    _ => return Err(CycloError::Parse(s.to_string())),
                };
                Ok((true, coeff))
            } else {
                Ok((false, parse_rational(term).map_err(|_| CycloError::Parse(s.to_string()))?))
            }
        };
        let terms: Vec<&str> = match split_at {
            None => vec![&compact],
            Some(i) => vec![&compact[..i], &compact[i..]],
        };
        let mut a = rat(0);
        let mut b = rat(0);
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            let (is_tau, coeff) = parse_term(term)?;
            if is_tau {
                b += coeff;
            } else {
                a += coeff;
            }
        }
        Ok(CycloQ6::new(a, b))
    }
}
