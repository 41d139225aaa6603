//! Arithmetic in `GF(p^e)` as `GF(p)[t] / (m(t))`.
//!
//! Contexts are built deterministically from the lexicographically least
//! monic irreducible of the requested degree, so element indices and
//! renderings are stable across runs.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::numtheory::{is_prime, mul_mod, pow_mod};

/// Default ceiling on `q` for every brute-force engine.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;
/// Absolute ceiling; a larger configured bound is rejected.
pub const HARD_MAX_Q: u64 = 1 << 24;

type Coeffs = SmallVec<[u64; 4]>;

struct FieldInner {
    p: u64,
    e: u32,
    q: u64,
    /// Monic, `e + 1` entries, low to high.
    modulus: Vec<u64>,
    max_q: u64,
}

/// Shared, immutable description of `GF(p^e)`.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({self})")
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = IntPoly::new(self.0.modulus.iter().map(|&c| BigInt::from(c)).collect());
        write!(f, "GF({}^{}) mod {}", self.0.p, self.0.e, m)
    }
}

/// Builds `GF(p^e)` under [`DEFAULT_MAX_Q`].
pub fn make_field(p: u64, e: u32) -> Result<FieldCtx> {
    make_field_bounded(p, e, DEFAULT_MAX_Q)
}

/// Builds `GF(p^e)` rejecting `p^e > max_q`. `max_q` itself may not exceed
/// [`HARD_MAX_Q`].
pub fn make_field_bounded(p: u64, e: u32, max_q: u64) -> Result<FieldCtx> {
    if max_q > HARD_MAX_Q {
        return Err(Error::InvalidArgument(format!(
            "field bound {max_q} exceeds hard cap {HARD_MAX_Q}"
        )));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = checked_pow(p, e)
        .filter(|&q| q <= max_q)
        .ok_or(Error::FieldTooLarge { p, e, bound: max_q })?;
    let modulus = least_irreducible(p, e as usize);
    Ok(FieldCtx(Arc::new(FieldInner {
        p,
        e,
        q,
        modulus,
        max_q,
    })))
}

/// Environment variable overriding [`DEFAULT_MAX_Q`].
pub const MAX_Q_ENV: &str = "FIBFIELD_MAX_Q";

/// The field bound from [`MAX_Q_ENV`], or [`DEFAULT_MAX_Q`] when unset.
pub fn max_q_from_env() -> Result<u64> {
    parse_max_q(std::env::var(MAX_Q_ENV).ok().as_deref())
}

fn parse_max_q(raw: Option<&str>) -> Result<u64> {
    let Some(raw) = raw else {
        return Ok(DEFAULT_MAX_Q);
    };
    let bound: u64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{MAX_Q_ENV}={raw:?} is not a positive integer")))?;
    if bound == 0 || bound > HARD_MAX_Q {
        return Err(Error::InvalidArgument(format!(
            "{MAX_Q_ENV}={bound} outside 1..={HARD_MAX_Q}"
        )));
    }
    Ok(bound)
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

/// Least monic irreducible of degree `e`, ordering candidates by their
/// coefficient vectors `(c_0, .., c_{e-1})` with `c_0` most significant.
fn least_irreducible(p: u64, e: usize) -> Vec<u64> {
    let count = p.pow(e as u32);
    for idx in 0..count {
        let mut poly = digits_msf(idx, p, e);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly.to_vec();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Base-`p` digits of `idx`, most significant first, `len` of them.
fn digits_msf(mut idx: u64, p: u64, len: usize) -> Coeffs {
    let mut out: Coeffs = SmallVec::from_elem(0, len);
    for slot in out.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

/// Exhaustive check: no monic divisor of degree `1..=deg/2`.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = digits_msf(idx, p, d);
            div.push(1);
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u64], monic_div: &[u64], p: u64) -> bool {
    let mut r = num.to_vec();
    let dd = monic_div.len() - 1;
    for top in (dd..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (j, &m) in monic_div.iter().enumerate() {
            let pos = top - dd + j;
            r[pos] = (r[pos] + p - mul_mod(c, m, p)) % p;
        }
    }
    r[..dd].iter().all(|&c| c == 0)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn max_q(&self) -> u64 {
        self.0.max_q
    }

    /// The defining modulus, low to high, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            ctx: self.clone(),
            coeffs: SmallVec::from_elem(0, self.0.e as usize),
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut z = self.zero();
        z.coeffs[0] = c % self.0.p;
        z
    }

    pub fn from_i64(&self, c: i64) -> FqElem {
        self.from_u64(c.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn from_bigint(&self, c: &BigInt) -> FqElem {
        let r = c.mod_floor(&BigInt::from(self.0.p));
        self.from_u64(r.try_into().expect("residue below p fits u64"))
    }

    /// Builds an element from its coefficient vector `(c_0, .., c_{e-1})`.
    pub fn element(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() != self.0.e as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.0.e,
                coeffs.len()
            )));
        }
        Ok(FqElem {
            ctx: self.clone(),
            coeffs: coeffs.iter().map(|&c| c % self.0.p).collect(),
        })
    }

    /// The class of `t`. In a prime field (modulus `x`) this is zero.
    pub fn generator(&self) -> FqElem {
        let mut t = self.zero();
        if self.0.e == 1 {
            t.coeffs[0] = (self.0.p - self.0.modulus[0]) % self.0.p;
        } else {
            t.coeffs[1] = 1;
        }
        t
    }

    /// Element at position `idx` of [`FieldCtx::enumerate`].
    pub fn element_at(&self, idx: u64) -> FqElem {
        assert!(idx < self.0.q, "index {idx} out of range for q={}", self.0.q);
        FqElem {
            ctx: self.clone(),
            coeffs: digits_msf(idx, self.0.p, self.0.e as usize),
        }
    }

    /// All `q` elements in coefficient-vector lexicographic order.
    pub fn enumerate(&self) -> Vec<FqElem> {
        (0..self.0.q).map(|i| self.element_at(i)).collect()
    }

    fn reduce_product(&self, prod: &mut [u64]) -> Coeffs {
        let p = self.0.p;
        let e = self.0.e as usize;
        for c in prod.iter_mut() {
            *c %= p;
        }
        let m = &self.0.modulus;
        for top in (e..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..e {
                let pos = top - e + j;
                prod[pos] = (prod[pos] + p - mul_mod(c, m[j], p)) % p;
            }
        }
        prod[..e].iter().copied().collect()
    }

    /// Square root in odd characteristic by Tonelli-Shanks; `None` for
    /// non-squares.
    pub fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        assert!(self.0.p != 2, "sqrt is implemented for odd characteristic");
        if a.is_zero() {
            return Some(a.clone());
        }
        let q = self.0.q;
        if !a.pow(((q - 1) / 2) as u128).is_one() {
            return None;
        }
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let non_residue = (1..q)
            .map(|i| self.element_at(i))
            .find(|z| !z.pow(((q - 1) / 2) as u128).is_one())
            .expect("odd fields contain non-squares");
        let mut m = s;
        let mut c = non_residue.pow(t as u128);
        let mut x = a.pow(t.div_ceil(2) as u128);
        let mut b = a.pow(t as u128);
        while !b.is_one() {
            let mut i = 0;
            let mut b2 = b.clone();
            while !b2.is_one() {
                b2 = &b2 * &b2;
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..(m - i - 1) {
                g = &g * &g;
            }
            x = &x * &g;
            c = &g * &g;
            b = &b * &c;
            m = i;
        }
        Some(x)
    }
}

/// An element of `GF(p^e)` as a length-`e` coefficient vector over `GF(p)`.
///
/// Operator impls panic when the operands come from different contexts;
/// the `checked_*` methods report [`Error::ContextMismatch`] instead.
#[derive(Clone)]
pub struct FqElem {
    ctx: FieldCtx,
    coeffs: Coeffs,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ctx == other.ctx
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.0.p.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(c_0,c_1,..)`
impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FqElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Position in [`FieldCtx::enumerate`].
    pub fn index(&self) -> u64 {
        let p = self.ctx.0.p;
        self.coeffs.iter().fold(0, |acc, &c| acc * p + c)
    }

    /// The prime-subfield value, if this element lies in `GF(p)`.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn check(&self, other: &FqElem) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn add_raw(&self, other: &FqElem) -> FqElem {
        let p = self.ctx.0.p;
        FqElem {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
        }
    }

    fn sub_raw(&self, other: &FqElem) -> FqElem {
        let p = self.ctx.0.p;
        FqElem {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| (a + p - b) % p)
                .collect(),
        }
    }

    fn mul_raw(&self, other: &FqElem) -> FqElem {
        let e = self.ctx.0.e as usize;
        let p = self.ctx.0.p;
        if e == 1 {
            return FqElem {
                ctx: self.ctx.clone(),
                coeffs: SmallVec::from_elem(mul_mod(self.coeffs[0], other.coeffs[0], p), 1),
            };
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FqElem {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.reduce_product(&mut prod),
        }
    }

    pub fn checked_add(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.add_raw(other))
    }

    pub fn checked_sub(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.sub_raw(other))
    }

    pub fn checked_mul(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.mul_raw(other))
    }

    pub fn checked_div(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.mul_raw(&other.inv()?))
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut exp: u128) -> FqElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            base = base.mul_raw(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.ctx.0.e == 1 {
            let p = self.ctx.0.p;
            return Ok(self.ctx.from_u64(pow_mod(self.coeffs[0], p - 2, p)));
        }
        Ok(self.pow((self.ctx.0.q - 2) as u128))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $raw:ident) => {
        impl $trait for &FqElem {
            type Output = FqElem;

            fn $method(self, rhs: &FqElem) -> FqElem {
                assert!(self.ctx == rhs.ctx, "field context mismatch");
                self.$raw(rhs)
            }
        }

        impl $trait for FqElem {
            type Output = FqElem;

            fn $method(self, rhs: FqElem) -> FqElem {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_raw);
binop!(Sub, sub, sub_raw);
binop!(Mul, mul, mul_raw);

impl Neg for &FqElem {
    type Output = FqElem;

    fn neg(self) -> FqElem {
        self.ctx.zero().sub_raw(self)
    }
}

impl Neg for FqElem {
    type Output = FqElem;

    fn neg(self) -> FqElem {
        -&self
    }
}

/// `GF(q^2)` together with an embedding of `GF(q)`.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    small: FieldCtx,
    big: FieldCtx,
    /// Image of the small field's generator: a root of its modulus.
    powers: Vec<FqElem>,
}

/// Builds `GF(q^2)` over `ctx` and embeds `GF(q)` by sending the class of
/// `t` to the first root (in enumeration order) of the defining modulus.
pub fn embed_quadratic(ctx: &FieldCtx) -> Result<QuadraticExtension> {
    let big = make_field_bounded(ctx.p(), 2 * ctx.e(), ctx.max_q())?;
    let modulus: Vec<FqElem> = ctx.modulus().iter().map(|&c| big.from_u64(c)).collect();
    let root = (0..big.q())
        .map(|i| big.element_at(i))
        .find(|y| {
            modulus
                .iter()
                .rev()
                .fold(big.zero(), |acc, c| &(&acc * y) + c)
                .is_zero()
        })
        .expect("an irreducible of degree e splits in GF(p^2e)");
    let mut powers = Vec::with_capacity(ctx.e() as usize);
    let mut acc = big.one();
    for _ in 0..ctx.e() {
        powers.push(acc.clone());
        acc = &acc * &root;
    }
    Ok(QuadraticExtension {
        small: ctx.clone(),
        big,
        powers,
    })
}

impl QuadraticExtension {
    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    /// Image of the small field's generator.
    pub fn generator_image(&self) -> FqElem {
        if self.small.e() == 1 {
            self.embed(&self.small.generator()).expect("same ctx")
        } else {
            self.powers[1].clone()
        }
    }

    pub fn embed(&self, a: &FqElem) -> Result<FqElem> {
        if a.ctx != self.small {
            return Err(Error::ContextMismatch);
        }
        Ok(a.coeffs
            .iter()
            .zip(&self.powers)
            .fold(self.big.zero(), |acc, (&c, pw)| {
                &acc + &(pw * &self.big.from_u64(c))
            }))
    }
}

/// The two roots of `u^2 - x u - 1` in `GF(q^2)`, equal when the
/// discriminant `x^2 + 4` vanishes.
///
/// Odd characteristic completes the square; characteristic 2 searches the
/// extension exhaustively.
pub fn solve_u(x: &FqElem, ext: &QuadraticExtension) -> Result<(FqElem, FqElem)> {
    let big = ext.big();
    let x = ext.embed(x)?;
    if big.p() == 2 {
        let mut roots = (0..big.q()).map(|i| big.element_at(i)).filter(|u| {
            (&(&(u * u) - &(&x * u)) - &big.one()).is_zero()
        });
        let u1 = roots.next().expect("quadratics split in GF(q^2)");
        let u2 = roots.next().unwrap_or_else(|| u1.clone());
        return Ok((u1, u2));
    }
    let disc = &(&x * &x) + &big.from_u64(4);
    let root = big
        .sqrt(&disc)
        .expect("elements of GF(q) are squares in GF(q^2)");
    let half = big.from_u64(2).inv()?;
    Ok((&(&x + &root) * &half, &(&x - &root) * &half))
}
