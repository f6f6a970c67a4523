//! Prime sieve, factorization and the classical arithmetic functions used by
//! the rest of the crate.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`PrimeSieve::new`].
pub const MAX_SIEVE_LIMIT: u64 = 1 << 31;

/// Linear sieve over `[2, limit]` storing the smallest prime factor of every
/// integer and the ascending list of primes.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
            return Err(Error::parameter(format!(
                "sieve limit {limit} outside [2, 2^31]"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || (p as usize) * i > n {
                    break;
                }
                spf[p as usize * i] = p;
            }
        }
        Ok(PrimeSieve { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Smallest prime factor of `n` (for `2 <= n <= limit`).
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes in the closed interval `[lo, hi]` (clamped to the sieve).
    pub fn primes_between(&self, lo: u64, hi: u64) -> &[u32] {
        let start = self.primes.partition_point(|&p| (p as u64) < lo);
        let end = self.primes.partition_point(|&p| (p as u64) <= hi);
        &self.primes[start..end.max(start)]
    }

    /// π(x), the number of primes `<= x`.
    pub fn prime_count(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }

    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 || n > self.limit {
            return Err(Error::parameter(format!(
                "cannot factor {n}: outside [1, {}]",
                self.limit
            )));
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(FactoredInteger { n, factors })
    }

    pub(crate) fn check_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::parameter(format!(
                "sieve limit {} does not cover {n}",
                self.limit
            )));
        }
        Ok(())
    }
}

/// `n` together with its canonical factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    pub n: u64,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Λ(n): `log p` when `n = p^k`, zero otherwise.
    pub fn von_mangoldt(&self) -> f64 {
        match self.factors.as_slice() {
            [(p, _)] => (*p as f64).ln(),
            _ => 0.0,
        }
    }

    /// Ω(n), prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Trial-division factorization for moduli that may exceed a sieve.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_prime_counts() {
        let s = PrimeSieve::new(10).unwrap();
        assert_eq!(s.primes(), &[2, 3, 5, 7]);
        let s = PrimeSieve::new(1000).unwrap();
        assert_eq!(s.prime_count(100), 25);
        assert_eq!(s.prime_count(1000), 168);
        assert_eq!(s.prime_count(1000) - s.prime_count(500), 73);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let s = PrimeSieve::new(100_000).unwrap();
        for n in 0..=100_000u64 {
            assert_eq!(s.is_prime(n), is_prime_trial(n), "n = {n}");
        }
        for n in 2..=100_000u64 {
            let p = s.spf(n);
            assert_eq!(n % p, 0);
            assert!(is_prime_trial(p));
        }
    }

    #[test]
    fn limit_guard() {
        assert!(matches!(PrimeSieve::new(1), Err(Error::Parameter(_))));
        assert!(matches!(
            PrimeSieve::new(MAX_SIEVE_LIMIT + 1),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn factor_examples() {
        let s = PrimeSieve::new(1000).unwrap();
        assert!(s.factorize(1).unwrap().factors.is_empty());
        assert_eq!(
            s.factorize(360).unwrap().factors,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert_eq!(s.factorize(97).unwrap().factors, vec![(97, 1)]);
        assert!(s.factorize(0).is_err());
        assert!(s.factorize(1001).is_err());
    }

    #[test]
    fn von_mangoldt_and_omega() {
        let s = PrimeSieve::new(100).unwrap();
        assert_eq!(s.factorize(8).unwrap().von_mangoldt(), 2f64.ln());
        assert_eq!(s.factorize(6).unwrap().von_mangoldt(), 0.0);
        assert_eq!(s.factorize(1).unwrap().von_mangoldt(), 0.0);
        assert_eq!(s.factorize(12).unwrap().big_omega(), 3);
        assert_eq!(s.factorize(1).unwrap().big_omega(), 0);
        assert_eq!(s.factorize(81).unwrap().big_omega(), 4);
    }

    #[test]
    fn von_mangoldt_divisor_sum_is_log() {
        let s = PrimeSieve::new(10_000).unwrap();
        for n in 1..=10_000u64 {
            let fac = s.factorize(n).unwrap();
            let total: f64 = fac
                .divisors()
                .iter()
                .map(|&d| s.factorize(d).unwrap().von_mangoldt())
                .sum();
            assert!((total - (n as f64).ln()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(trial_factor(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    fn shared_sieve() -> &'static PrimeSieve {
        static SIEVE: std::sync::OnceLock<PrimeSieve> = std::sync::OnceLock::new();
        SIEVE.get_or_init(|| PrimeSieve::new(90_000).unwrap())
    }

    proptest::proptest! {
        #[test]
        fn big_omega_completely_additive(m in 1u64..300, n in 1u64..300) {
            let s = shared_sieve();
            let lhs = s.factorize(m * n).unwrap().big_omega();
            let rhs = s.factorize(m).unwrap().big_omega() + s.factorize(n).unwrap().big_omega();
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
