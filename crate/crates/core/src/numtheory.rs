//! Small integer helpers: primality, trial-division factoring, binomials.

use num_bigint::BigUint;
use num_traits::One;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as ascending `(prime, exponent)` pairs.
/// `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Renders a factorization as `3^2*5`; the empty product renders as `1`.
pub fn render_factorization(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".to_string();
    }
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficients modulo a prime via Lucas' theorem.
///
/// Factorial tables cover residues below `min(p, limit + 1)`; `limit` is the
/// largest upper argument the caller will ask for.
#[derive(Debug, Clone)]
pub struct BinomModP {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl BinomModP {
    pub fn new(p: u64, limit: u64) -> Self {
        let size = p.min(limit.saturating_add(1)).max(1) as usize;
        let mut fact = vec![1u64; size];
        for i in 1..size {
            fact[i] = mul_mod(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1u64; size];
        inv_fact[size - 1] = pow_mod(fact[size - 1], p - 2, p);
        for i in (1..size).rev() {
            inv_fact[i - 1] = mul_mod(inv_fact[i], i as u64, p);
        }
        Self { p, fact, inv_fact }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn small(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let (n, k) = (n as usize, k as usize);
        mul_mod(
            mul_mod(self.fact[n], self.inv_fact[k], self.p),
            self.inv_fact[n - k],
            self.p,
        )
    }

    pub fn binom(&self, mut n: u64, mut k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % self.p, k % self.p);
            if kd > nd {
                return 0;
            }
            acc = mul_mod(acc, self.small(nd, kd), self.p);
            n /= self.p;
            k /= self.p;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(1215), vec![(3, 5), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(render_factorization(&factorize(45)), "3^2*5");
        assert_eq!(render_factorization(&[]), "1");
    }

    #[test]
    fn lucas_matches_exact() {
        for p in [2u64, 3, 5, 7] {
            let table = BinomModP::new(p, 60);
            for n in 0..60 {
                for k in 0..=n + 1 {
                    let exact = binomial(n, k) % BigUint::from(p);
                    assert_eq!(BigUint::from(table.binom(n, k)), exact, "C({n},{k}) mod {p}");
                }
            }
        }
    }
}
