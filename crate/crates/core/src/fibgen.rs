//! Fibonacci and Dickson polynomial generators over `Z`, and the
//! self-reciprocity scanner.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::intpoly::{is_palindrome, IntPoly};
use crate::numtheory::{binomial, factorize, is_prime, BinomModP};

/// Iterator over `f_0, f_1, f_2, ...` by the three-term recurrence.
#[derive(Debug, Clone)]
pub struct FibIter {
    prev: IntPoly,
    cur: IntPoly,
}

impl FibIter {
    pub fn new() -> Self {
        // f_{-1} = 1, so that f_1 = x * f_0 + f_{-1}
        Self {
            prev: IntPoly::one(),
            cur: IntPoly::zero(),
        }
    }
}

impl Default for FibIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for FibIter {
    type Item = IntPoly;

    fn next(&mut self) -> Option<IntPoly> {
        let next = IntPoly::mul_by_x_plus(&self.cur, &self.prev);
        let out = std::mem::replace(&mut self.cur, next);
        self.prev = out.clone();
        Some(out)
    }
}

/// `f_n` by `f_n = x f_{n-1} + f_{n-2}`, extended to negative `n` through
/// `f_{-n} = (-1)^{n+1} f_n`.
pub fn fib_poly_recurrence(n: i64) -> IntPoly {
    let m = n.unsigned_abs();
    let f = FibIter::new().nth(m as usize).expect("infinite iterator");
    if n < 0 && m % 2 == 0 {
        -f
    } else {
        f
    }
}

/// `f_n = sum_j C(n-j-1, j) x^(n-2j-1)`, defined for `n >= 0`.
pub fn fib_poly_binomial(n: i64) -> Result<IntPoly> {
    if n < 0 {
        return Err(Error::NegativeIndex(n));
    }
    let n = n as u64;
    if n == 0 {
        return Ok(IntPoly::zero());
    }
    let mut coeffs = vec![BigInt::zero(); n as usize];
    for j in 0..=(n - 1) / 2 {
        coeffs[(n - 2 * j - 1) as usize] = BigInt::from(binomial(n - j - 1, j));
    }
    Ok(IntPoly::new(coeffs))
}

/// Coefficient of `x^k` in `f_n`: `C((n+k-1)/2, k)` when `n` and `k` have
/// different parity and `k < n`, zero otherwise.
pub fn fib_coeff(n: u64, k: u64) -> BigUint {
    if (n + k) % 2 == 0 || k >= n {
        return BigUint::zero();
    }
    binomial((n + k - 1) / 2, k)
}

/// `f_n` reduced mod a prime, via Lucas on the closed-form coefficients.
pub(crate) fn fib_residues(n: u64, table: &BinomModP) -> Vec<u64> {
    let mut coeffs = vec![0u64; n as usize];
    if n == 0 {
        return coeffs;
    }
    for j in 0..=(n - 1) / 2 {
        coeffs[(n - 2 * j - 1) as usize] = table.binom(n - j - 1, j);
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

/// Dickson polynomial of the second kind,
/// `E_n(x, a) = sum_i C(n-i, i) (-a)^i x^(n-2i)`.
pub fn dickson2<A: Into<BigInt>>(n: u64, a: A) -> IntPoly {
    let neg_a = -a.into();
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    let mut power = BigInt::one();
    for i in 0..=n / 2 {
        coeffs[(n - 2 * i) as usize] = BigInt::from(binomial(n - i, i)) * &power;
        power *= &neg_a;
    }
    IntPoly::new(coeffs)
}

/// Dickson polynomial of the `(k+1)`-th kind,
/// `D_{n,k}(x, a) = sum_i (n-ki)/(n-i) C(n-i, i) (-a)^i x^(n-2i)`,
/// with `D_{0,k} = 2 - k`.
///
/// Each term is formed as the exact quotient `C(n-i, i) (n-ki) / (n-i)`;
/// a nonzero remainder is reported as an error.
pub fn dickson_kind<A: Into<BigInt>>(n: u64, k: u64, a: A) -> Result<IntPoly> {
    if n == 0 {
        return Ok(IntPoly::constant(BigInt::from(2) - BigInt::from(k)));
    }
    let neg_a = -a.into();
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    let mut power = BigInt::one();
    for i in 0..=n / 2 {
        let numer = BigInt::from(binomial(n - i, i)) * (BigInt::from(n) - BigInt::from(k) * i);
        let (quot, rem) = numer.div_rem(&BigInt::from(n - i));
        if !rem.is_zero() {
            return Err(Error::NonIntegralTerm { n, k, i });
        }
        coeffs[(n - 2 * i) as usize] = quot * &power;
        power *= &neg_a;
    }
    Ok(IntPoly::new(coeffs))
}

/// Expands `z / (1 - x z - z^2)` as a power series in `z` with polynomial
/// coefficients and compares the first `n_terms` coefficients with the
/// closed-form `f_m` (both reduced when a modulus is given).
pub fn generating_series_check(n_terms: usize, modulus: Option<u64>) -> Result<bool> {
    if n_terms < 2 {
        return Err(Error::InvalidArgument("n_terms must be >= 2".into()));
    }
    let numer = [IntPoly::zero(), IntPoly::one()];
    let denom = [IntPoly::one(), -IntPoly::x(), -IntPoly::one()];
    let reduce = |p: IntPoly| match modulus {
        Some(m) => p.reduce_mod(m),
        None => Ok(p),
    };
    // denom[0] = 1, so series division needs no inversion
    let mut series: Vec<IntPoly> = Vec::with_capacity(n_terms);
    for m in 0..n_terms {
        let mut c = numer.get(m).cloned().unwrap_or_default();
        for (j, d) in denom.iter().enumerate().skip(1) {
            if j <= m {
                c = &c - &mul_poly(d, &series[m - j]);
            }
        }
        series.push(reduce(c)?);
    }
    for (m, c) in series.iter().enumerate() {
        if *c != reduce(fib_poly_binomial(m as i64)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mul_poly(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() || b.is_zero() {
        return IntPoly::zero();
    }
    let mut out = vec![BigInt::zero(); a.coeffs().len() + b.coeffs().len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPoly::new(out)
}

/// Multipliers `m` of the known sufficient families `n = m * p^l`.
pub fn known_families(p: u64) -> &'static [u64] {
    match p {
        3 => &[1, 5, 41, 5 * 73, 25 * 1181],
        5 => &[1, 3, 13, 3 * 29, 9 * 7],
        _ => &[],
    }
}

/// Whether `n` is accounted for by the classification: `{1, 3, 5}` in
/// general, plus the `m * p^l` families at `p = 3, 5`.
pub fn in_known_family(p: u64, n: u64) -> bool {
    if matches!(n, 1 | 3 | 5) {
        return true;
    }
    let mut rest = n;
    loop {
        if known_families(p).contains(&rest) {
            return true;
        }
        if p < 2 || rest % p != 0 {
            return false;
        }
        rest /= p;
    }
}

/// All family members `m * p^l <= n_max`, ascending.
pub fn family_members(p: u64, n_max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for &m in known_families(p) {
        let mut n = m;
        while n <= n_max {
            out.push(n);
            n *= p;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Result of a self-reciprocity scan of `f_1 ..= f_{n_max}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    /// 0 for a scan over `Z`.
    pub p: u64,
    pub n_max: u64,
    /// Ascending; includes the degree-0 hit `n = 1`.
    pub hits: Vec<u64>,
    pub factored_hits: Vec<(u64, Vec<(u64, u32)>)>,
    /// Hits not explained by the known families.
    pub outside_families: Vec<u64>,
}

/// One JSON-lines record per hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRecord {
    pub p: u64,
    pub n: u64,
    pub degree: u64,
    pub factorization: Vec<(u64, u32)>,
    pub palindromic: bool,
}

/// Trailing JSON-lines record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSummary {
    pub p: u64,
    pub n_max: u64,
    pub hit_count: usize,
    pub outside_families: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScanLine {
    Record(ScanRecord),
    Summary(ScanSummary),
}

impl ScanReport {
    fn from_hits(p: u64, n_max: u64, hits: Vec<u64>) -> Self {
        let factored_hits = hits.iter().map(|&n| (n, factorize(n))).collect();
        let outside_families = hits
            .iter()
            .copied()
            .filter(|&n| !in_known_family(p, n))
            .collect();
        Self {
            p,
            n_max,
            hits,
            factored_hits,
            outside_families,
        }
    }

    /// Hits of degree at least one (drops `f_1 = 1`).
    pub fn nontrivial_hits(&self) -> Vec<u64> {
        self.hits.iter().copied().filter(|&n| n > 1).collect()
    }

    pub fn without_trivial(&self) -> ScanReport {
        ScanReport::from_hits(self.p, self.n_max, self.nontrivial_hits())
    }

    /// Family members up to `n_max` that the scan did not find.
    pub fn missing_family_members(&self) -> Vec<u64> {
        family_members(self.p, self.n_max)
            .into_iter()
            .filter(|n| self.hits.binary_search(n).is_err())
            .collect()
    }

    pub fn records(&self) -> Vec<ScanRecord> {
        self.factored_hits
            .iter()
            .map(|(n, f)| ScanRecord {
                p: self.p,
                n: *n,
                degree: n - 1,
                factorization: f.clone(),
                palindromic: true,
            })
            .collect()
    }

    pub fn summary(&self) -> ScanSummary {
        ScanSummary {
            p: self.p,
            n_max: self.n_max,
            hit_count: self.hits.len(),
            outside_families: self.outside_families.clone(),
        }
    }

    /// One record per hit followed by the summary line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in self.records() {
            out.push_str(&serde_json::to_string(&r).expect("plain data serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary()).expect("plain data serializes"));
        out.push('\n');
        out
    }

    pub fn from_json_lines(text: &str) -> Result<ScanReport> {
        let mut hits = Vec::new();
        let mut summary = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<ScanLine>(line).map_err(|e| Error::Parse(e.to_string()))? {
                ScanLine::Record(r) => hits.push(r.n),
                ScanLine::Summary(s) => summary = Some(s),
            }
        }
        let s = summary.ok_or_else(|| Error::Parse("missing summary line".into()))?;
        if s.hit_count != hits.len() {
            return Err(Error::Parse(format!(
                "summary counts {} hits, found {}",
                s.hit_count,
                hits.len()
            )));
        }
        Ok(ScanReport::from_hits(s.p, s.n_max, hits))
    }
}

const SCAN_CHUNK: u64 = 128;

/// Finds every `n <= n_max` with `f_n` self-reciprocal over `Z` (`p = 0`)
/// or modulo the prime `p`.
pub fn selfreciprocal_scan(p: u64, n_max: u64) -> Result<ScanReport> {
    selfreciprocal_scan_with(p, n_max, Exec::default())
}

/// [`selfreciprocal_scan`] with an explicit execution policy.
///
/// The range is cut into chunks; each chunk is seeded from the closed form
/// and then advanced with the recurrence.
pub fn selfreciprocal_scan_with(p: u64, n_max: u64, exec: Exec) -> Result<ScanReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    if p != 0 && !is_prime(p) {
        return Err(Error::NotZeroOrPrime(p));
    }
    let chunks = n_max.div_ceil(SCAN_CHUNK);
    let per_chunk = exec.map_range(0..chunks, |c| {
        let lo = 1 + c * SCAN_CHUNK;
        let hi = (lo + SCAN_CHUNK - 1).min(n_max);
        if p == 0 {
            scan_chunk_integer(lo, hi)
        } else {
            scan_chunk_mod_p(p, lo, hi)
        }
    });
    let hits = per_chunk.into_iter().flatten().collect();
    Ok(ScanReport::from_hits(p, n_max, hits))
}

fn scan_chunk_integer(lo: u64, hi: u64) -> Vec<u64> {
    let mut prev = fib_poly_binomial(lo as i64 - 1).expect("lo >= 1");
    let mut cur = fib_poly_binomial(lo as i64).expect("lo >= 1");
    let mut hits = Vec::new();
    for n in lo..=hi {
        if n > lo {
            let next = IntPoly::mul_by_x_plus(&cur, &prev);
            prev = std::mem::replace(&mut cur, next);
        }
        if cur.is_self_reciprocal(None).expect("f_n is nonzero for n >= 1") {
            hits.push(n);
        }
    }
    hits
}

fn scan_chunk_mod_p(p: u64, lo: u64, hi: u64) -> Vec<u64> {
    let table = BinomModP::new(p, lo);
    let mut prev = fib_residues(lo - 1, &table);
    let mut cur = fib_residues(lo, &table);
    let mut hits = Vec::new();
    for n in lo..=hi {
        if n > lo {
            let mut next = vec![0u64; cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] = c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] = (next[i] + c) % p;
            }
            while next.last() == Some(&0) {
                next.pop();
            }
            prev = std::mem::replace(&mut cur, next);
        }
        if is_palindrome(&cur) {
            hits.push(n);
        }
    }
    hits
}
