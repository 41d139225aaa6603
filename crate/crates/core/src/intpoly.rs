//! Dense polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial over `Z` stored densely, `coeffs[i]` being the coefficient
/// of `x^i`.
///
/// The representation is canonical: the highest stored coefficient is
/// nonzero, and the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Returns `x * p + q`, one step of the Fibonacci recurrence.
    pub fn mul_by_x_plus(p: &IntPoly, q: &IntPoly) -> IntPoly {
        let len = (p.coeffs.len() + 1).max(q.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in p.coeffs.iter().enumerate() {
            out[i + 1] += c;
        }
        for (i, c) in q.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }

    /// `x^n f(1/x)` for `n = deg f`. A zero constant term makes the result
    /// drop in degree.
    pub fn reciprocal(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("reciprocal"));
        }
        Ok(IntPoly::new(self.coeffs.iter().rev().cloned().collect()))
    }

    /// Palindrome test `a_i == a_{deg - i}`.
    ///
    /// With a modulus the coefficients are reduced first and the degree is
    /// taken from the reduced polynomial.
    pub fn is_self_reciprocal(&self, modulus: Option<&BigInt>) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("self-reciprocal test"));
        }
        let reduced;
        let poly = match modulus {
            Some(m) => {
                reduced = self.reduce_mod(m.clone())?;
                if reduced.is_zero() {
                    return Err(Error::ZeroPolynomial("self-reciprocal test"));
                }
                &reduced
            }
            None => self,
        };
        Ok(is_palindrome(&poly.coeffs))
    }

    /// Reduces every coefficient into `[0, m)`.
    pub fn reduce_mod<M: Into<BigInt>>(&self, m: M) -> Result<IntPoly> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidModulus(m));
        }
        Ok(IntPoly::new(
            self.coeffs.iter().map(|c| c.mod_floor(&m)).collect(),
        ))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

pub(crate) fn is_palindrome<T: PartialEq>(c: &[T]) -> bool {
    c.iter().eq(c.iter().rev())
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o += c;
        }
        IntPoly::new(out)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        -&self
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

/// Renders `x^4 + 3x^2 + 1`, `-x^3 - 2x`, `0`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if i == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Parses the rendering produced by `Display`. Also accepts an explicit
/// `*` between coefficient and `x`, and repeated exponents (which add).
impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut current = String::new();
        for (i, ch) in compact.char_indices() {
            if ch == '+' || ch == '-' {
                if i > 0 {
                    if current.is_empty() {
                        return Err(Error::Parse(format!("dangling sign in {s:?}")));
                    }
                    terms.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        terms.push((negative, current));

        let mut coeffs: Vec<BigInt> = Vec::new();
        for (neg, term) in terms {
            let (c, exp) =
                parse_term(&term).ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += if neg { -c } else { c };
        }
        Ok(IntPoly::new(coeffs))
    }
}

fn parse_term(term: &str) -> Option<(BigInt, usize)> {
    if term.is_empty() {
        return None;
    }
    match term.find('x') {
        None => Some((term.parse().ok()?, 0)),
        Some(pos) => {
            let head = term[..pos].trim_end_matches('*');
            let c = if head.is_empty() {
                BigInt::one()
            } else {
                head.parse().ok()?
            };
            let tail = &term[pos + 1..];
            let exp = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^')?.parse().ok()?
            };
            Some((c, exp))
        }
    }
}
