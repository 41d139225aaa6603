//! Fibonacci polynomials as functions `GF(q) -> GF(q)`: reduction modulo
//! `x^q - x`, functional periods, the `u - 1/u` parametrization and
//! permutation tests.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffield::{embed_quadratic, solve_u, FieldCtx, FqElem};
use crate::fibgen::fib_residues;
use crate::numtheory::BinomModP;

/// Dense polynomial over a [`FieldCtx`], canonical (no zero leading term).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqPoly {
    ctx: FieldCtx,
    coeffs: Vec<FqElem>,
}

impl FqPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FqElem>) -> Result<FqPoly> {
        if coeffs.iter().any(|c| c.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut p = FqPoly {
            ctx: ctx.clone(),
            coeffs,
        };
        p.normalize();
        Ok(p)
    }

    /// Lifts integer coefficients into the prime subfield.
    pub fn from_prime_coeffs(ctx: &FieldCtx, coeffs: &[u64]) -> FqPoly {
        let mut p = FqPoly {
            ctx: ctx.clone(),
            coeffs: coeffs.iter().map(|&c| ctx.from_u64(c)).collect(),
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(FqElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Values at every element, in enumeration order.
    pub fn values(&self) -> Vec<FqElem> {
        self.ctx.enumerate().iter().map(|x| self.eval(x)).collect()
    }
}

/// Renders like `x^4 + 2x^2 + 1` when every coefficient lies in the prime
/// subfield, and with `(c0,..)` tuples otherwise.
impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = match c.as_prime_field() {
                Some(1) if i > 0 => String::new(),
                Some(v) => v.to_string(),
                None => c.to_string(),
            };
            write!(f, "{coeff}")?;
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `f_n` with its binomial coefficients reduced into `GF(p) ⊂ GF(q)`.
pub fn fib_mod_field(n: u64, ctx: &FieldCtx) -> FqPoly {
    let table = BinomModP::new(ctx.p(), n);
    FqPoly::from_prime_coeffs(ctx, &fib_residues(n, &table))
}

/// Folds exponents `m >= q` to `((m - 1) mod (q - 1)) + 1`; the constant
/// term stays put. The result has degree `< q` and the same values.
pub fn reduce_mod_xq_minus_x(poly: &FqPoly) -> FqPoly {
    let q = poly.ctx.q() as usize;
    if poly.coeffs.len() <= q {
        return poly.clone();
    }
    let mut out = vec![poly.ctx.zero(); q];
    for (m, c) in poly.coeffs.iter().enumerate() {
        let slot = if m < q { m } else { (m - 1) % (q - 1) + 1 };
        out[slot] = &out[slot] + c;
    }
    FqPoly::new(&poly.ctx, out).expect("same ctx")
}

/// Equality as functions on `GF(q)`, by exhaustive evaluation.
pub fn func_equal(a: &FqPoly, b: &FqPoly) -> Result<bool> {
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(a.ctx.enumerate().iter().all(|x| a.eval(x) == b.eval(x)))
}

/// Which functional-period formula applies to `GF(p^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `p ≡ 1 (mod 4)`, or `e` even: `-1` is a square in `GF(q)`.
    OneMod4OrEvenE,
    /// `p ≡ 3 (mod 4)` and `e` odd.
    ThreeMod4OddE,
    Char2,
}

impl CaseTag {
    pub fn of(ctx: &FieldCtx) -> CaseTag {
        if ctx.p() == 2 {
            CaseTag::Char2
        } else if ctx.p() % 4 == 1 || ctx.e() % 2 == 0 {
            CaseTag::OneMod4OrEvenE
        } else {
            CaseTag::ThreeMod4OddE
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::OneMod4OrEvenE => "ONE_MOD4_OR_EVEN_E",
            CaseTag::ThreeMod4OddE => "THREE_MOD4_ODD_E",
            CaseTag::Char2 => "CHAR2",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodClaim {
    pub case: CaseTag,
    /// `n1 ≡ n2` modulo this implies `f_{n1} = f_{n2}` on `GF(q)`.
    pub modulus: u128,
}

/// `p(p^{2e} - 1)/2`, `p^{2e} - 1` or `2^{2e+1} - 2` depending on the case.
pub fn period_modulus(ctx: &FieldCtx) -> PeriodClaim {
    let case = CaseTag::of(ctx);
    let p = ctx.p() as u128;
    let q2 = (ctx.q() as u128) * (ctx.q() as u128);
    let modulus = match case {
        CaseTag::OneMod4OrEvenE => p * (q2 - 1) / 2,
        CaseTag::ThreeMod4OddE => q2 - 1,
        CaseTag::Char2 => 2 * q2 - 2,
    };
    PeriodClaim { case, modulus }
}

/// Checks `f_n = f_{n + modulus}` as functions for
/// `n = n_lo .. n_lo + count`.
///
/// In characteristic 2 the value at `x = 0` is additionally checked against
/// `f_n(0) = n mod 2`.
pub fn verify_period(ctx: &FieldCtx, n_lo: u64, count: u64) -> Result<bool> {
    verify_period_with(ctx, n_lo, count, Exec::default())
}

pub fn verify_period_with(ctx: &FieldCtx, n_lo: u64, count: u64, exec: Exec) -> Result<bool> {
    if n_lo == 0 || count == 0 {
        return Err(Error::InvalidArgument("n_lo and count must be positive".into()));
    }
    let modulus: u64 = period_modulus(ctx)
        .modulus
        .try_into()
        .map_err(|_| Error::InvalidArgument("period modulus exceeds u64".into()))?;
    let zero = ctx.zero();
    Ok(exec.all(n_lo..n_lo + count, |n| {
        let a = reduce_mod_xq_minus_x(&fib_mod_field(n, ctx));
        let b = reduce_mod_xq_minus_x(&fib_mod_field(n + modulus, ctx));
        if ctx.p() == 2 {
            let parity = |m: u64| ctx.from_u64(m % 2);
            if a.eval(&zero) != parity(n) || b.eval(&zero) != parity(n + modulus) {
                return false;
            }
        }
        func_equal(&a, &b).expect("same ctx")
    }))
}

/// Checks the `u - 1/u` parametrization of `f_{n+1}` at every `x` in
/// `GF(q)`, and the closed form `f_{n+1}(±2b) = (n+1)(±b)^n` where
/// `x^2 + 4 = 0`. Arithmetic happens in `GF(q^2)`.
pub fn functional_expression_check(ctx: &FieldCtx, n: u64) -> Result<bool> {
    functional_expression_check_with(ctx, n, Exec::default())
}

pub fn functional_expression_check_with(ctx: &FieldCtx, n: u64, exec: Exec) -> Result<bool> {
    let ext = embed_quadratic(ctx)?;
    let big = ext.big();
    let f = fib_mod_field(n + 1, ctx);
    let four = ctx.from_u64(4);
    let elements = ctx.enumerate();
    let verdicts = exec.map_slice(&elements, |x| -> Result<bool> {
        let direct = ext.embed(&f.eval(x))?;
        if (&(x * x) + &four).is_zero() {
            // b^2 = -1 with x = 2b; in characteristic 2 that is x = 0, b = 1
            let b = if ctx.p() == 2 {
                ctx.one()
            } else {
                x.checked_div(&ctx.from_u64(2))?
            };
            let closed = &ctx.from_u64(n + 1) * &b.pow(n as u128);
            return Ok(direct == ext.embed(&closed)?);
        }
        let (u1, u2) = solve_u(x, &ext)?;
        let minus_one = -big.one();
        let usable = |u: &FqElem| u * u != minus_one;
        let u = if usable(&u1) { u1 } else { u2 };
        let u_inv = u.inv()?;
        let denom = &u + &u_inv;
        let numer = &u.pow(n as u128 + 1) - &(-&u_inv).pow(n as u128 + 1);
        Ok(direct == numer.checked_div(&denom)?)
    });
    verdicts
        .into_iter()
        .try_fold(true, |acc, v| v.map(|ok| acc && ok))
}

/// Whether the values hit every element exactly once.
pub fn is_permutation_values(values: &[FqElem]) -> bool {
    let q = match values.first() {
        Some(v) => v.ctx().q() as usize,
        None => return false,
    };
    if values.len() != q {
        return false;
    }
    let mut seen = vec![false; q];
    for v in values {
        let i = v.index() as usize;
        if seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

pub fn is_permutation(poly: &FqPoly) -> bool {
    is_permutation_values(&poly.values())
}

/// `sum_{a in GF(q)} p(a)^i`.
pub fn power_sum(poly: &FqPoly, i: u64) -> Result<FqElem> {
    if i == 0 {
        return Err(Error::InvalidArgument("power must be >= 1".into()));
    }
    Ok(poly
        .values()
        .iter()
        .fold(poly.ctx.zero(), |acc, v| &acc + &v.pow(i as u128)))
}

/// Power sums `i = 1 ..= q - 1` of a value vector.
pub fn power_sums_values(ctx: &FieldCtx, values: &[FqElem]) -> Vec<FqElem> {
    let mut powers = values.to_vec();
    let mut out = Vec::with_capacity(ctx.q() as usize - 1);
    for i in 1..ctx.q() {
        if i > 1 {
            for (pw, v) in powers.iter_mut().zip(values) {
                *pw = &*pw * v;
            }
        }
        out.push(powers.iter().fold(ctx.zero(), |acc, v| &acc + v));
    }
    out
}

/// The power-sum side of the bijectivity criterion: sums vanish for
/// `1 <= i <= q-2` and not for `i = q-1`.
pub fn power_sum_criterion(ctx: &FieldCtx, values: &[FqElem]) -> bool {
    let sums = power_sums_values(ctx, values);
    let (last, rest) = sums.split_last().expect("q >= 2");
    rest.iter().all(FqElem::is_zero) && !last.is_zero()
}

/// `is_permutation(p)` agrees with the power-sum criterion.
pub fn hermite_consistency(poly: &FqPoly) -> bool {
    let values = poly.values();
    is_permutation_values(&values) == power_sum_criterion(&poly.ctx, &values)
}

/// `rows[n][j] = f_n(x_j)` for `n = 0 ..= n_max`, `x_j` in enumeration
/// order, by the value recurrence `f_n(x) = x f_{n-1}(x) + f_{n-2}(x)`.
pub fn fib_value_table(ctx: &FieldCtx, n_max: u64) -> Vec<Vec<FqElem>> {
    let xs = ctx.enumerate();
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    rows.push(vec![ctx.zero(); xs.len()]);
    if n_max >= 1 {
        rows.push(vec![ctx.one(); xs.len()]);
    }
    for n in 2..=n_max as usize {
        let row = xs
            .iter()
            .zip(rows[n - 1].iter().zip(&rows[n - 2]))
            .map(|(x, (a, b))| &(x * a) + b)
            .collect();
        rows.push(row);
    }
    rows
}

/// A permutation polynomial found by [`permutation_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermHit {
    pub n: u64,
    /// `sum_x f_n(x)`.
    pub first_moment: FqElem,
    /// Whether the power-sum criterion agrees.
    pub hermite_ok: bool,
}

/// Every `1 <= n <= n_max` with `f_n` a permutation of `GF(q)`.
pub fn permutation_scan(ctx: &FieldCtx, n_max: u64, exec: Exec) -> Vec<PermHit> {
    let rows = fib_value_table(ctx, n_max);
    let indexed: Vec<(u64, &Vec<FqElem>)> = rows
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, r)| (n as u64, r))
        .collect();
    exec.map_slice(&indexed, |&(n, row)| {
        is_permutation_values(row).then(|| PermHit {
            n,
            first_moment: row.iter().fold(ctx.zero(), |acc, v| &acc + v),
            hermite_ok: power_sum_criterion(ctx, row),
        })
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    fn field(p: u64, e: u32) -> FieldCtx {
        make_field(p, e).unwrap()
    }

    #[test]
    fn fib_mod_field_examples() {
        let f3 = field(3, 1);
        assert_eq!(
            fib_mod_field(5, &f3),
            FqPoly::from_prime_coeffs(&f3, &[1, 0, 0, 0, 1])
        );
        assert!(fib_mod_field(0, &f3).is_zero());
        assert_eq!(
            fib_mod_field(7, &f3),
            FqPoly::from_prime_coeffs(&f3, &[1, 0, 0, 0, 2, 0, 1])
        );
        assert_eq!(fib_mod_field(7, &f3).to_string(), "x^6 + 2x^4 + 1");
    }

    #[test]
    fn reduction_examples() {
        let f9 = field(3, 2);
        let mut c = vec![0u64; 10];
        c[9] = 1;
        let x9 = FqPoly::from_prime_coeffs(&f9, &c);
        assert_eq!(reduce_mod_xq_minus_x(&x9), FqPoly::from_prime_coeffs(&f9, &[0, 1]));
        let k = FqPoly::from_prime_coeffs(&f9, &[2]);
        assert_eq!(reduce_mod_xq_minus_x(&k), k);

        let f3 = field(3, 1);
        let f9red = reduce_mod_xq_minus_x(&fib_mod_field(9, &f3));
        assert!(f9red.degree().unwrap() < 3);
        for x in f3.enumerate() {
            assert!(f9red.eval(&x).is_one());
        }
    }

    #[test]
    fn reduction_preserves_function() {
        for (p, e) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let ctx = field(p, e);
            for n in 0..60 {
                let f = fib_mod_field(n, &ctx);
                assert!(func_equal(&f, &reduce_mod_xq_minus_x(&f)).unwrap());
            }
        }
    }

    #[test]
    fn func_equal_examples() {
        let f3 = field(3, 1);
        assert!(func_equal(&fib_mod_field(1, &f3), &fib_mod_field(9, &f3)).unwrap());
        let f = fib_mod_field(6, &f3);
        assert!(func_equal(&f, &f).unwrap());
        assert!(!func_equal(&fib_mod_field(1, &f3), &fib_mod_field(2, &f3)).unwrap());
        let f5 = field(5, 1);
        assert_eq!(
            func_equal(&fib_mod_field(1, &f3), &fib_mod_field(1, &f5)),
            Err(Error::ContextMismatch)
        );
    }

    #[test]
    fn period_claims() {
        let pm = |p, e| period_modulus(&field(p, e));
        assert_eq!(pm(3, 1), PeriodClaim { case: CaseTag::ThreeMod4OddE, modulus: 8 });
        assert_eq!(pm(5, 1), PeriodClaim { case: CaseTag::OneMod4OrEvenE, modulus: 60 });
        assert_eq!(pm(2, 1), PeriodClaim { case: CaseTag::Char2, modulus: 6 });
        assert_eq!(pm(3, 2).modulus, 120);
        assert_eq!(pm(3, 2).case, CaseTag::OneMod4OrEvenE);
        assert_eq!(pm(2, 3).modulus, 126);
        assert_eq!(pm(7, 2).modulus, 8400);
    }

    #[test]
    fn verify_period_examples() {
        assert!(verify_period(&field(3, 1), 1, 8).unwrap());
        assert!(verify_period(&field(2, 1), 1, 6).unwrap());
        assert!(verify_period(&field(5, 1), 1, 12).unwrap());
        assert!(verify_period(&field(5, 1), 0, 12).is_err());
    }

    #[test]
    fn period_properties_small_fields() {
        // every n1 ≡ n2 (mod period), q <= 16
        for (p, e) in [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let ctx = field(p, e);
            let m = period_modulus(&ctx).modulus as u64;
            let rows = fib_value_table(&ctx, 2 * m + 3);
            for n in 1..=m + 3 {
                assert_eq!(rows[n as usize], rows[(n + m) as usize], "GF({p}^{e}) n={n}");
            }
        }
    }

    #[test]
    fn functional_expression_examples() {
        assert!(functional_expression_check(&field(3, 1), 4).unwrap());
        let f5 = field(5, 1);
        // x = 4 = 2*2 with 2^2 = -1 takes the degenerate branch
        assert!((&(&f5.from_u64(4) * &f5.from_u64(4)) + &f5.from_u64(4)).is_zero());
        assert!(functional_expression_check(&f5, 6).unwrap());
        assert!(functional_expression_check(&field(7, 1), 1).unwrap());
        assert!(functional_expression_check(&field(2, 2), 9).unwrap());
    }

    #[test]
    fn permutation_examples() {
        for q in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            assert!(is_permutation(&fib_mod_field(2, &field(q.0, q.1))));
        }
        assert!(!is_permutation(&fib_mod_field(3, &field(5, 1))));
        assert!(is_permutation(&fib_mod_field(3, &field(2, 1))));
    }

    #[test]
    fn power_sum_examples() {
        let f5 = field(5, 1);
        assert!(power_sum(&fib_mod_field(2, &f5), 1).unwrap().is_zero());
        assert_eq!(power_sum(&fib_mod_field(2, &f5), 4).unwrap(), f5.from_u64(4));
        let f3 = field(3, 1);
        assert_eq!(power_sum(&fib_mod_field(3, &f3), 1).unwrap(), f3.from_u64(2));
        assert!(power_sum(&fib_mod_field(3, &f3), 0).is_err());
    }

    #[test]
    fn hermite_examples() {
        assert!(hermite_consistency(&fib_mod_field(2, &field(7, 1))));
        assert!(hermite_consistency(&fib_mod_field(3, &field(5, 1))));
        let f3 = field(3, 1);
        for n in 1..=8 {
            assert!(hermite_consistency(&fib_mod_field(n, &f3)));
        }
    }

    #[test]
    fn hermite_holds_through_a_period() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let ctx = field(p, e);
            let m = period_modulus(&ctx).modulus as u64;
            for n in 1..=m {
                let f = fib_mod_field(n, &ctx);
                assert!(hermite_consistency(&f), "GF({p}^{e}) n={n}");
                if ctx.q() > 2 && is_permutation(&f) {
                    assert!(power_sum(&f, 1).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn value_table_matches_polynomials() {
        let ctx = field(3, 2);
        let rows = fib_value_table(&ctx, 40);
        for (n, row) in rows.iter().enumerate() {
            assert_eq!(*row, fib_mod_field(n as u64, &ctx).values());
        }
    }

    #[test]
    fn permutation_scan_small() {
        let f2 = field(2, 1);
        let hits: Vec<u64> = permutation_scan(&f2, 6, Exec::Sequential).iter().map(|h| h.n).collect();
        assert!(hits.contains(&2) && hits.contains(&3));
        let f5 = field(5, 1);
        let seq = permutation_scan(&f5, 60, Exec::Sequential);
        assert_eq!(seq, permutation_scan(&f5, 60, Exec::Parallel));
        assert!(seq.iter().all(|h| h.hermite_ok && h.first_moment.is_zero()));
    }
}
