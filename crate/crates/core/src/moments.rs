//! Moment tables `d_n = sum_{x in GF(q)} f_n(x)^i` over one functional
//! period: the direct-summation oracle, the coefficient recurrences for odd
//! `q`, and the relations stated for even `q`.
//!
//! Tables are 0-based vectors with entry `j - 1` holding `d_j`. The oracle
//! is the ground truth; recurrences are compared against it, never assumed.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffield::{FieldCtx, FqElem};
use crate::fqfunc::{period_modulus, CaseTag};
use crate::numtheory::BinomModP;

/// Coefficients `b_k` over `GF(p)`, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BTable {
    p: u64,
    values: Vec<u64>,
}

impl BTable {
    /// `b_k`, zero outside `1..=len`.
    pub fn get(&self, k: i64) -> u64 {
        if k < 1 {
            return 0;
        }
        self.values.get(k as usize - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    fn neg(&self, k: i64) -> u64 {
        (self.p - self.get(k)) % self.p
    }
}

fn require_case(ctx: &FieldCtx, expected: CaseTag) -> Result<()> {
    let found = CaseTag::of(ctx);
    if found == expected {
        Ok(())
    } else {
        Err(Error::WrongCase {
            expected: expected.as_str(),
            found: found.as_str(),
        })
    }
}

/// Coefficients of `z (1 + (z - z^q)^{q-1})` for `1 <= k <= q^2 - q + 1`:
/// with `k = a + b q`, `b_k = (-1)^b C(q-1, b)` if `a + b = q`, `1` if
/// `a + b = 1`, else `0`.
pub fn b_table_case1(ctx: &FieldCtx) -> Result<BTable> {
    require_case(ctx, CaseTag::ThreeMod4OddE)?;
    let (p, q) = (ctx.p(), ctx.q());
    let binom = BinomModP::new(p, q);
    let values = (1..=q * q - q + 1)
        .map(|k| {
            let (alpha, beta) = (k % q, k / q);
            if alpha + beta == q {
                let c = binom.binom(q - 1, beta);
                if beta % 2 == 0 {
                    c
                } else {
                    (p - c) % p
                }
            } else if alpha + beta == 1 {
                1
            } else {
                0
            }
        })
        .collect();
    Ok(BTable { p, values })
}

/// Coefficients of `(z^{s+1} - z) / (z^{q-1} - 1)`, `s = p(q^2 - 1)/2`:
/// `b_k = 1` iff `k = 1 + t(q-1)` with `0 <= t <= p(q+1)/2 - 1`.
pub fn b_table_case2(ctx: &FieldCtx) -> Result<BTable> {
    require_case(ctx, CaseTag::OneMod4OrEvenE)?;
    let (p, q) = (ctx.p(), ctx.q());
    let s = p * (q * q - 1) / 2;
    let mut values = vec![0u64; (s - q + 2) as usize];
    for t in 0..p * (q + 1) / 2 {
        values[(t * (q - 1)) as usize] = 1;
    }
    Ok(BTable { p, values })
}

/// First-moment table `d_1 ..= d_period` from the piecewise recurrences.
///
/// Values live in `GF(p)`. Case 1 has separate `q = 3` and `q > 3` forms.
pub fn d_from_recurrence(ctx: &FieldCtx, case: CaseTag) -> Result<Vec<u64>> {
    let q = ctx.q() as i64;
    match case {
        CaseTag::ThreeMod4OddE => {
            let b = b_table_case1(ctx)?;
            if q == 3 {
                Ok(recurrence_case1_q3(&b, q))
            } else {
                Ok(recurrence_middle(&b, q, q * q - 1))
            }
        }
        CaseTag::OneMod4OrEvenE => {
            let b = b_table_case2(ctx)?;
            let s = ctx.p() as i64 * (q * q - 1) / 2;
            Ok(recurrence_middle(&b, q, s))
        }
        CaseTag::Char2 => Err(Error::WrongCase {
            expected: "odd characteristic",
            found: CaseTag::Char2.as_str(),
        }),
    }
}

fn recurrence_case1_q3(b: &BTable, q: i64) -> Vec<u64> {
    let period = q * q - 1;
    (1..=period)
        .map(|j| {
            if j <= q - 1 {
                0
            } else if j <= q + 1 {
                b.neg(j - (q - 1))
            } else if j == q * q - (q + 1) {
                b.neg(j + 2)
            } else {
                0
            }
        })
        .collect()
}

/// The `q > 3` form, shared by both odd cases with `period` = `q^2 - 1` or
/// `s`: zero, boundary, middle recurrence, boundary, zero tail.
fn recurrence_middle(b: &BTable, q: i64, period: i64) -> Vec<u64> {
    let p = b.p;
    let mut d = vec![0u64; period as usize];
    for j in 1..=period {
        let v = if j <= q - 1 {
            0
        } else if j <= q + 1 {
            b.neg(j - (q - 1))
        } else if j <= period - (q + 1) {
            (b.neg(j - (q - 1)) + p - d[(j - (q + 1) - 1) as usize]) % p
        } else if j == period - q {
            b.neg(j + 2)
        } else {
            0
        };
        d[(j - 1) as usize] = v;
    }
    d
}

/// The functional period used for moment tables.
pub fn moment_period(ctx: &FieldCtx) -> u64 {
    period_modulus(ctx).modulus as u64
}

/// `sum_x f_n(x)^power` for `n = 1 ..= period`, by direct evaluation.
pub fn d_oracle(ctx: &FieldCtx, power: u32) -> Result<Vec<FqElem>> {
    d_oracle_range(ctx, power, moment_period(ctx), Exec::default())
}

/// `sum_x f_n(x)^power` for `n = 1 ..= n_max`.
pub fn d_oracle_range(ctx: &FieldCtx, power: u32, n_max: u64, exec: Exec) -> Result<Vec<FqElem>> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be >= 1".into()));
    }
    let xs = ctx.enumerate();
    let chunks: Vec<&[FqElem]> = xs.chunks(16).collect();
    let partials = exec.map_slice(&chunks, |chunk| {
        let mut acc = vec![ctx.zero(); n_max as usize];
        for x in chunk.iter() {
            let (mut prev, mut cur) = (ctx.zero(), ctx.one());
            for slot in acc.iter_mut() {
                *slot = &*slot + &cur.pow(power as u128);
                let next = &(x * &cur) + &prev;
                prev = std::mem::replace(&mut cur, next);
            }
        }
        acc
    });
    Ok(partials
        .into_iter()
        .reduce(|a, b| a.iter().zip(&b).map(|(u, v)| u + v).collect())
        .unwrap_or_else(|| vec![ctx.zero(); n_max as usize]))
}

/// `sum_x x^k` for `k = 1 ..= q - 1`.
pub fn monomial_sums(ctx: &FieldCtx) -> Vec<FqElem> {
    let xs = ctx.enumerate();
    (1..ctx.q())
        .map(|k| xs.iter().fold(ctx.zero(), |acc, x| &acc + &x.pow(k as u128)))
        .collect()
}

/// Recurrence and oracle tables over one period for one field.
#[derive(Debug, Clone)]
pub struct MomentSeries {
    pub ctx: FieldCtx,
    pub case: CaseTag,
    pub period: u64,
    pub power: u32,
    pub b: Option<BTable>,
    /// `None` when no recurrence applies (odd `q` with power 2).
    pub d_recur: Option<Vec<FqElem>>,
    pub d_oracle: Vec<FqElem>,
    /// `agree[j] == (d_recur[j] == d_oracle[j])`; empty without a recurrence.
    pub agree: Vec<bool>,
}

/// One disagreeing index between recurrence and oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub n: u64,
    pub recur: FqElem,
    pub oracle: FqElem,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} recurrence={} oracle={}", self.n, render_value(&self.recur), render_value(&self.oracle))
    }
}

#[derive(Serialize)]
struct CsvRow {
    n: u64,
    d_recur: String,
    d_oracle: String,
    agree: String,
}

impl MomentSeries {
    fn build(ctx: &FieldCtx, power: u32, b: Option<BTable>, d_recur: Option<Vec<FqElem>>, d_oracle: Vec<FqElem>) -> Self {
        let agree = d_recur
            .as_ref()
            .map(|r| r.iter().zip(&d_oracle).map(|(a, b)| a == b).collect())
            .unwrap_or_default();
        MomentSeries {
            ctx: ctx.clone(),
            case: CaseTag::of(ctx),
            period: d_oracle.len() as u64,
            power,
            b,
            d_recur,
            d_oracle,
            agree,
        }
    }

    /// Oracle-only table, e.g. the second moment for odd `q`.
    pub fn oracle_only(ctx: &FieldCtx, power: u32) -> Result<Self> {
        Ok(Self::build(ctx, power, None, None, d_oracle(ctx, power)?))
    }

    pub fn all_agree(&self) -> bool {
        self.d_recur.is_some() && self.agree.iter().all(|&a| a)
    }

    pub fn disagreements(&self) -> Vec<Disagreement> {
        let Some(recur) = &self.d_recur else {
            return Vec::new();
        };
        recur
            .iter()
            .zip(&self.d_oracle)
            .enumerate()
            .filter(|(_, (r, o))| r != o)
            .map(|(j, (r, o))| Disagreement {
                n: j as u64 + 1,
                recur: r.clone(),
                oracle: o.clone(),
            })
            .collect()
    }

    /// `d_n` for any `n >= 1`, folded into the period.
    pub fn oracle_at(&self, n: u64) -> &FqElem {
        assert!(n >= 1, "moment tables start at n = 1");
        &self.d_oracle[((n - 1) % self.period) as usize]
    }

    pub fn header(&self) -> String {
        format!(
            "# q={} case={} period={} power={}",
            self.ctx.q(),
            self.case,
            self.period,
            self.power
        )
    }

    /// Metadata comment line, then `n,d_recur,d_oracle,agree` rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (j, oracle) in self.d_oracle.iter().enumerate() {
            let recur = self.d_recur.as_ref().map(|r| &r[j]);
            w.serialize(CsvRow {
                n: j as u64 + 1,
                d_recur: recur.map(render_value).unwrap_or_default(),
                d_oracle: render_value(oracle),
                agree: self.agree.get(j).map(|a| a.to_string()).unwrap_or_default(),
            })
            .expect("in-memory csv write");
        }
        let body = String::from_utf8(w.into_inner().expect("flush to Vec")).expect("utf8 csv");
        format!("{}\n{}", self.header(), body)
    }
}

/// Prime-subfield values render as integers, others as coefficient tuples.
pub fn render_value(v: &FqElem) -> String {
    match v.as_prime_field() {
        Some(c) => c.to_string(),
        None => v.to_string(),
    }
}

/// Builds both tables for odd `q` and compares them index by index.
pub fn cross_validate(ctx: &FieldCtx) -> Result<MomentSeries> {
    let case = CaseTag::of(ctx);
    if case == CaseTag::Char2 {
        return Err(Error::WrongCase {
            expected: "odd characteristic",
            found: case.as_str(),
        });
    }
    let b = match case {
        CaseTag::ThreeMod4OddE => b_table_case1(ctx)?,
        _ => b_table_case2(ctx)?,
    };
    let recur: Vec<FqElem> = d_from_recurrence(ctx, case)?
        .into_iter()
        .map(|v| ctx.from_u64(v))
        .collect();
    let oracle = d_oracle(ctx, 1)?;
    Ok(MomentSeries::build(ctx, 1, Some(b), Some(recur), oracle))
}

/// An identity `lhs = rhs` evaluated on oracle values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: FqElem,
    pub rhs: FqElem,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// One coefficient of the generating identity
/// `(z^{q-1} - 1)(z^{q+1} + 1) sum d_n z^n = z^{2q^2+q-3} - z^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffCheck {
    pub exponent: usize,
    pub lhs: FqElem,
    pub rhs: FqElem,
}

/// The even-`q` relations evaluated against the oracle, under both readings
/// of the stated relations: closed form or constraint set.
#[derive(Debug, Clone)]
pub struct EvenQReport {
    pub q: u64,
    pub power: u32,
    pub period: u64,
    pub oracle: Vec<FqElem>,
    /// Constraint reading: `d_1 = 1 + d_q` and
    /// `d_P = 1 + d_{P-2} - d_{P-q-1}` with `P = 2q^2 - 2`.
    pub identities: Vec<IdentityCheck>,
    /// Indices `j ∉ {1, P}` where the oracle is nonzero although the
    /// relations list `d_j = 0`.
    pub nonzero_elsewhere: Vec<u64>,
    /// Closed-form reading: `d_1 = d_P = 1`, zero elsewhere.
    pub closed_form: Vec<FqElem>,
    /// Every coefficient of the generating identity.
    pub generating_identity: Vec<CoeffCheck>,
    /// `d_n = d_{n+P}` for `n = 1..=P`.
    pub oracle_periodic: bool,
    /// The same report for the second moment, attached when `power == 1`.
    pub second_moment: Option<Box<EvenQReport>>,
}

impl EvenQReport {
    pub fn closed_form_agrees(&self) -> bool {
        self.closed_form == self.oracle
    }

    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(IdentityCheck::holds) && self.nonzero_elsewhere.is_empty()
    }

    pub fn generating_mismatches(&self) -> Vec<&CoeffCheck> {
        self.generating_identity.iter().filter(|c| c.lhs != c.rhs).collect()
    }

    /// The table as a [`MomentSeries`] with the closed-form reading in the
    /// recurrence column.
    pub fn series(&self, ctx: &FieldCtx) -> MomentSeries {
        MomentSeries::build(ctx, self.power, None, Some(self.closed_form.clone()), self.oracle.clone())
    }

    /// Human-readable multi-line summary.
    pub fn render(&self) -> String {
        let mut out = format!(
            "q={} power={} period={} oracle periodic: {}\n",
            self.q,
            self.power,
            self.period,
            ok(self.oracle_periodic)
        );
        for id in &self.identities {
            out.push_str(&format!(
                "  {}: lhs={} rhs={} {}\n",
                id.name,
                render_value(&id.lhs),
                render_value(&id.rhs),
                ok(id.holds())
            ));
        }
        out.push_str(&format!("  zero elsewhere: violated at {:?}\n", self.nonzero_elsewhere));
        out.push_str(&format!("  closed-form reading: {}\n", ok(self.closed_form_agrees())));
        let bad: Vec<usize> = self.generating_mismatches().iter().map(|c| c.exponent).collect();
        out.push_str(&format!(
            "  generating identity: {} ({} of {} coefficients differ: {:?})\n",
            ok(bad.is_empty()),
            bad.len(),
            self.generating_identity.len(),
            bad
        ));
        if let Some(second) = &self.second_moment {
            out.push_str(&second.render());
        }
        out
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

/// Evaluates the even-`q` relations against the oracle table.
pub fn even_q_relations_check(ctx: &FieldCtx, power: u32) -> Result<EvenQReport> {
    if ctx.p() != 2 {
        return Err(Error::WrongCase {
            expected: CaseTag::Char2.as_str(),
            found: CaseTag::of(ctx).as_str(),
        });
    }
    let q = ctx.q();
    let period = 2 * q * q - 2;
    let two_periods = d_oracle_range(ctx, power, 2 * period, Exec::default())?;
    let (oracle, next) = two_periods.split_at(period as usize);
    let oracle = oracle.to_vec();
    let oracle_periodic = oracle == next;
    let d = |j: u64| oracle[(j - 1) as usize].clone();
    let one = ctx.one();

    let identities = vec![
        IdentityCheck {
            name: format!("d_1 = 1 + d_{q}"),
            lhs: d(1),
            rhs: &one + &d(q),
        },
        IdentityCheck {
            name: format!("d_{period} = 1 + d_{} - d_{}", period - 2, period - q - 1),
            lhs: d(period),
            rhs: &(&one + &d(period - 2)) - &d(period - q - 1),
        },
    ];
    let nonzero_elsewhere = (2..period).filter(|&j| !d(j).is_zero()).collect();
    let closed_form = (1..=period)
        .map(|j| if j == 1 || j == period { one.clone() } else { ctx.zero() })
        .collect();

    // (z^{q-1} - 1)(z^{q+1} + 1) = z^{2q} + z^{q-1} - z^{q+1} - 1
    let qu = q as usize;
    let factor: Vec<(usize, FqElem)> = vec![
        (2 * qu, one.clone()),
        (qu - 1, one.clone()),
        (qu + 1, -&one),
        (0, -&one),
    ];
    let top = 2 * qu + period as usize;
    let mut lhs = vec![ctx.zero(); top + 1];
    for (j, dj) in oracle.iter().enumerate() {
        for (shift, c) in &factor {
            let slot = j + 1 + shift;
            lhs[slot] = &lhs[slot] + &(dj * c);
        }
    }
    let mut rhs = vec![ctx.zero(); top + 1];
    let hi = (2 * q * q + q - 3) as usize;
    rhs[hi] = &rhs[hi] + &one;
    rhs[qu] = &rhs[qu] - &one;
    let generating_identity = lhs
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(exponent, (lhs, rhs))| CoeffCheck { exponent, lhs, rhs })
        .collect();

    let second_moment = if power == 1 {
        Some(Box::new(even_q_relations_check(ctx, 2)?))
    } else {
        None
    };

    Ok(EvenQReport {
        q,
        power,
        period,
        oracle,
        identities,
        nonzero_elsewhere,
        closed_form,
        generating_identity,
        oracle_periodic,
        second_moment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    fn field(p: u64, e: u32) -> FieldCtx {
        make_field(p, e).unwrap()
    }

    fn prime_values(v: &[FqElem]) -> Vec<u64> {
        v.iter().map(|x| x.as_prime_field().unwrap()).collect()
    }

    /// Dense polynomial product over GF(p), test-side only.
    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        out
    }

    #[test]
    fn b_case1_examples() {
        let b = b_table_case1(&field(3, 1)).unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!(b.get(1), 1);
        assert_eq!(b.get(7), 1);
        assert_eq!(b.get(2), 0);
        assert_eq!(b.get(0), 0);
        assert!(matches!(b_table_case1(&field(5, 1)), Err(Error::WrongCase { .. })));
    }

    #[test]
    fn b_case1_is_expansion() {
        for q in [3u64, 7, 11] {
            let p = q;
            // (z - z^q)^{q-1} by repeated multiplication
            let mut base = vec![0u64; q as usize + 1];
            base[1] = 1;
            base[q as usize] = p - 1;
            let mut acc = vec![1u64];
            for _ in 0..q - 1 {
                acc = mul(&acc, &base, p);
            }
            acc[0] = (acc[0] + 1) % p;
            let expansion = mul(&acc, &[0, 1], p);
            let b = b_table_case1(&field(q, 1)).unwrap();
            assert_eq!(expansion.len() - 1, b.len());
            for k in 1..expansion.len() {
                assert_eq!(b.get(k as i64), expansion[k], "q={q} k={k}");
            }
        }
    }

    #[test]
    fn b_case2_examples_and_identity() {
        let b = b_table_case2(&field(5, 1)).unwrap();
        assert_eq!(b.get(1), 1);
        assert_eq!(b.get(5), 1);
        assert_eq!(b.get(3), 0);
        assert!(b_table_case2(&field(3, 1)).is_err());
        for (p, e) in [(5u64, 1u32), (13, 1), (3, 2)] {
            let ctx = field(p, e);
            let q = ctx.q();
            let s = p * (q * q - 1) / 2;
            let b = b_table_case2(&ctx).unwrap();
            let mut series = vec![0u64];
            series.extend_from_slice(b.values());
            let mut factor = vec![0u64; q as usize];
            factor[0] = p - 1;
            factor[q as usize - 1] = 1;
            let prod = mul(&factor, &series, p);
            let mut want = vec![0u64; s as usize + 2];
            want[1] = p - 1;
            want[s as usize + 1] = 1;
            assert_eq!(prod, want, "GF({p}^{e})");
        }
    }

    #[test]
    fn recurrence_q3() {
        let d = d_from_recurrence(&field(3, 1), CaseTag::ThreeMod4OddE).unwrap();
        assert_eq!(d, vec![0, 0, 2, 0, 2, 0, 0, 0]);
        assert!(d_from_recurrence(&field(3, 1), CaseTag::OneMod4OrEvenE).is_err());
        assert!(d_from_recurrence(&field(2, 1), CaseTag::Char2).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f3 = field(3, 1);
        let d = d_oracle(&f3, 1).unwrap();
        assert_eq!(prime_values(&d), vec![0, 0, 2, 0, 2, 0, 0, 0]);
        let f2 = field(2, 1);
        assert_eq!(prime_values(&d_oracle(&f2, 1).unwrap()), vec![0, 1, 1, 1, 0, 0]);
        assert!(d_oracle(&f2, 0).is_err());
        let seq = d_oracle_range(&field(5, 1), 2, 60, Exec::Sequential).unwrap();
        assert_eq!(seq, d_oracle_range(&field(5, 1), 2, 60, Exec::Parallel).unwrap());
    }

    #[test]
    fn monomial_sums_vanish_except_last() {
        for (p, e) in [(3, 1), (5, 1), (3, 2), (2, 2), (7, 1)] {
            let ctx = field(p, e);
            let sums = monomial_sums(&ctx);
            let (last, rest) = sums.split_last().unwrap();
            assert!(rest.iter().all(FqElem::is_zero));
            assert_eq!(*last, -ctx.one());
        }
    }

    #[test]
    fn cross_validate_small() {
        let s = cross_validate(&field(3, 1)).unwrap();
        assert_eq!(s.period, 8);
        assert!(s.all_agree());
        assert!(s.disagreements().is_empty());
        let s7 = cross_validate(&field(7, 1)).unwrap();
        assert_eq!(s7.period, 48);
        assert!(s7.all_agree(), "{:?}", s7.disagreements());
        let s5 = cross_validate(&field(5, 1)).unwrap();
        assert_eq!(s5.period, 60);
        assert_eq!(s5.agree.len(), 60);
        assert!(s5.all_agree());
        assert!(cross_validate(&field(2, 2)).is_err());
        assert_eq!(s.oracle_at(11), s.oracle_at(3));
    }

    #[test]
    fn oracle_boundary_zeros() {
        for (p, e) in [(3u64, 1u32), (7, 1), (5, 1), (3, 2)] {
            let ctx = field(p, e);
            let q = ctx.q();
            let d = d_oracle(&ctx, 1).unwrap();
            let period = d.len() as u64;
            assert!(d[..(q - 1) as usize].iter().all(FqElem::is_zero));
            let tail_start = match CaseTag::of(&ctx) {
                CaseTag::ThreeMod4OddE => q * q - q,
                _ => period - (q - 1),
            };
            assert!(d[(tail_start - 1) as usize..].iter().all(FqElem::is_zero));
        }
    }

    #[test]
    fn permutation_forces_zero_first_moment() {
        use crate::fqfunc::permutation_scan;
        for (p, e) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (2, 2)] {
            let ctx = field(p, e);
            let period = moment_period(&ctx);
            let d = d_oracle(&ctx, 1).unwrap();
            let hits = permutation_scan(&ctx, period, Exec::default());
            assert!(!hits.is_empty(), "GF({p}^{e})");
            for hit in hits {
                assert!(d[((hit.n - 1) % period) as usize].is_zero(), "GF({p}^{e}) n={}", hit.n);
                assert_eq!(hit.first_moment, d[(hit.n - 1) as usize]);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let s = cross_validate(&field(3, 1)).unwrap();
        let text = s.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# q=3 case=THREE_MOD4_ODD_E period=8 power=1");
        assert_eq!(lines.next().unwrap(), "n,d_recur,d_oracle,agree");
        assert_eq!(lines.clone().count(), 8);
        assert_eq!(lines.nth(2).unwrap(), "3,2,2,true");

        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| &r[3] == "true"));
    }

    #[test]
    fn even_q2_report() {
        let r = even_q_relations_check(&field(2, 1), 1).unwrap();
        assert_eq!(r.period, 6);
        assert_eq!(prime_values(&r.oracle), vec![0, 1, 1, 1, 0, 0]);
        assert!(r.identities[0].holds());
        assert!(!r.identities[1].holds());
        assert_eq!(r.nonzero_elsewhere, vec![2, 3, 4]);
        assert!(!r.closed_form_agrees());
        assert!(r.oracle_periodic);
        let bad: Vec<usize> = r.generating_mismatches().iter().map(|c| c.exponent).collect();
        assert_eq!(bad, vec![7, 8]);
        assert!(r.second_moment.as_ref().unwrap().oracle_periodic);
        assert!(r.render().contains("d_1 = 1 + d_2"));
        assert!(even_q_relations_check(&field(3, 1), 1).is_err());
    }
}
