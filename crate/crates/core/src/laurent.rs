//! Sparse centered Laurent polynomials in one variable `u`.
//!
//! Exponents range over positive and negative integers; coefficients live
//! in an exact field (rationals or the sixth-root-of-unity field). Only
//! nonzero coefficients are stored, since the polynomials handled here
//! have a handful of terms scattered over a wide exponent range.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclo::CycloQ6;
use crate::rational::Rational;

/// Exact field coefficients usable in a [`LaurentPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_integer(n: i64) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Exact string form for rendering and JSON.
    fn render(&self) -> String;
}

impl Coeff for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_integer(n: i64) -> Self {
        crate::rational::rat(n)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Coeff for CycloQ6 {
    fn inv(&self) -> Option<Self> {
        CycloQ6::inv(self).ok()
    }
    fn from_integer(n: i64) -> Self {
        CycloQ6::from_integer(n)
    }
    fn to_complex(&self) -> Complex64 {
        self.eval_numeric(53)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LaurentError<C: Coeff> {
    #[error("sigma index must be nonzero")]
    SigmaZero,
    #[error("variable scale must be nonzero")]
    ZeroScale,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: LaurentPoly<C> },
    #[error("evaluation at zero is undefined for negative exponents")]
    ZeroEvalPoint,
}

/// Centered Laurent polynomial: finite map exponent -> nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C: Coeff> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::one())
    }

    pub fn monomial(exp: i64, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in iter {
            p.add_term(k, c);
        }
        p
    }

    /// `sigma(u^k) = u^k - u^-k`; rejects `k = 0` (the zero polynomial).
    pub fn sigma(k: i64) -> Result<Self, LaurentError<C>> {
        if k == 0 {
            return Err(LaurentError::SigmaZero);
        }
        Ok(Self::from_terms([(k, C::one()), (-k, -C::one())]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient at exponent `k` (zero if absent).
    pub fn coeff(&self, k: i64) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Largest `|k|` over nonzero terms; 0 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Exponent span `max - min`; 0 for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.max_exp(), self.min_exp()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        }
    }

    fn add_term(&mut self, exp: i64, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(k, v)| (k, v.clone() * c.clone())))
    }

    /// Substitutes `u -> c*u`: the coefficient at exponent `k` picks up `c^k`.
    pub fn scale_variable(&self, c: &C) -> Result<Self, LaurentError<C>> {
        if c.is_zero() {
            return Err(LaurentError::ZeroScale);
        }
        let mut out = Self::zero();
        for (k, v) in self.terms() {
            out.add_term(k, v.clone() * scalar_pow(c, k).expect("nonzero scale"));
        }
        Ok(out)
    }

    /// Substitutes `u -> 1/u`: every exponent flips sign.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (-k, v.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Applies `u d/du`: the coefficient at exponent `k` is multiplied by `k`.
    pub fn theta(&self) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(k, v)| (k, v.clone() * C::from_integer(k))),
        )
    }

    /// Exact division: returns `q` with `q * den == self`, or the remainder
    /// on failure. Runs from the highest exponent downward, like ordinary
    /// polynomial division after clearing negative exponents by a monomial.
    pub fn divide_exact(&self, den: &Self) -> Result<Self, LaurentError<C>> {
        if den.is_zero() {
            return Err(LaurentError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let den_max = den.max_exp().expect("nonzero");
        let den_lead_inv = den
            .coeff(den_max)
            .inv()
            .expect("leading coefficient of a nonzero polynomial");
        let quot_min = self.min_exp().expect("nonzero") - den.min_exp().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rem_max) = rem.max_exp() {
            let qexp = rem_max - den_max;
            if qexp < quot_min {
                return Err(LaurentError::NotDivisible { remainder: rem });
            }
            let qc = rem.coeff(rem_max) * den_lead_inv.clone();
            for (k, c) in den.terms() {
                rem.add_term(k + qexp, -(qc.clone() * c.clone()));
            }
            quot.add_term(qexp, qc);
        }
        Ok(quot)
    }

    /// Evaluates at a nonzero scalar of the coefficient field.
    pub fn eval_scalar(&self, x: &C) -> Result<C, LaurentError<C>> {
        if x.is_zero() && self.min_exp().is_some_and(|lo| lo < 0) {
            return Err(LaurentError::ZeroEvalPoint);
        }
        let mut acc = C::zero();
        for (k, c) in self.terms() {
            acc = acc + c.clone() * scalar_pow(x, k).ok_or(LaurentError::ZeroEvalPoint)?;
        }
        Ok(acc)
    }

    /// Horner-style numeric evaluation at complex `u != 0`.
    pub fn eval_numeric(&self, u: Complex64) -> Result<Complex64, LaurentError<C>> {
        if u == Complex64::new(0.0, 0.0) {
            return Err(LaurentError::ZeroEvalPoint);
        }
        let pos = horner(
            self.terms.range(0..).rev().map(|(k, c)| (*k, c.to_complex())),
            u,
        );
        let neg = horner(
            self.terms.range(..0).map(|(k, c)| (-*k, c.to_complex())),
            1.0 / u,
        );
        Ok(pos + neg)
    }

    /// `(exponent, coefficient-string)` pairs in decreasing exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(k, c)| (*k, c.render()))
            .collect()
    }
}

impl LaurentPoly<Rational> {
    /// Promotes rational coefficients into the cyclotomic field.
    pub fn to_cyclo(&self) -> LaurentPoly<CycloQ6> {
        LaurentPoly::from_terms(
            self.terms()
                .map(|(k, c)| (k, CycloQ6::from_rational(c.clone()))),
        )
    }
}

impl From<&LaurentPoly<Rational>> for LaurentPoly<CycloQ6> {
    fn from(p: &LaurentPoly<Rational>) -> Self {
        p.to_cyclo()
    }
}

/// `x^k` in the coefficient field; `None` when `x = 0` and `k < 0`.
pub fn scalar_pow<C: Coeff>(x: &C, k: i64) -> Option<C> {
    let base = if k < 0 { x.inv()? } else { x.clone() };
    let mut n = k.unsigned_abs();
    let mut acc = C::one();
    let mut sq = base;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * sq.clone();
        }
        n >>= 1;
        if n > 0 {
            sq = sq.clone() * sq.clone();
        }
    }
    Some(acc)
}

fn horner<I: Iterator<Item = (i64, Complex64)>>(descending: I, x: Complex64) -> Complex64 {
    // sparse Horner over terms with non-negative exponents, highest first
    let mut acc = Complex64::new(0.0, 0.0);
    let mut last_exp: Option<i64> = None;
    for (k, c) in descending {
        if let Some(prev) = last_exp {
            acc *= x.powi((prev - k) as i32);
        }
        acc += c;
        last_exp = Some(k);
    }
    match last_exp {
        None => Complex64::new(0.0, 0.0),
        Some(k) => acc * x.powi(k as i32),
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k, -c.clone())))
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (k1, c1) in self.terms() {
            for (k2, c2) in rhs.terms() {
                out.add_term(k1 + k2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let s = c.render();
            let interior_sign = s[1..].contains('+') || s[1..].contains('-');
            let (sign, body) = if interior_sign {
                ('+', format!("({s})"))
            } else if let Some(rest) = s.strip_prefix('-') {
                ('-', rest.to_string())
            } else {
                ('+', s)
            };
            let body = match (*k, body.as_str()) {
                (0, _) => body,
                (1, "1") => "u".to_string(),
                (1, _) => format!("{body}*u"),
                (_, "1") => format!("u^{k}"),
                _ => format!("{body}*u^{k}"),
            };
            if first {
                if sign == '-' {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
