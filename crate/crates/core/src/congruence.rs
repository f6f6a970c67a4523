//! Roots of an irreducible integer polynomial modulo n, the counting
//! function ρ(n) and its statistics.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, mod_inv, PrimeSieve};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numeric::block_sum;
use crate::phase::FracFixed;

/// Root tables above this N need an explicit opt-in.
pub const LARGE_TABLE_N: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Irreducibility {
    /// No rational root and degree <= 3.
    RationalRootChecked,
    /// Irreducible modulo this prime.
    Certified { prime: u64 },
    /// Neither test succeeded; taken on trust.
    Asserted,
}

/// Integer polynomial of degree e >= 2 with nonzero discriminant.
#[derive(Debug, Clone, PartialEq)]
pub struct IntPoly {
    /// Ascending coefficients.
    coeffs: Vec<i64>,
    disc: BigInt,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.len() < 3 {
            return Err(Error::parameter("polynomial must have degree >= 2"));
        }
        let disc = discriminant_of(&coeffs);
        if disc.is_zero() {
            return Err(Error::parameter(
                "discriminant is zero: polynomial has a repeated factor",
            ));
        }
        Ok(IntPoly { coeffs, disc })
    }

    /// Parses a sum of integer monomials in x, e.g. `x^2+1`, `3x^3 - 2*x + 7`.
    pub fn parse(expr: &str) -> Result<Self> {
        Self::new(parse_int_poly(expr)?)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// p(v) mod m, for any modulus m < 2^63.
    pub fn eval_mod(&self, v: u64, m: u64) -> u64 {
        let m = m as i128;
        let v = v as i128 % m;
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| (acc * v + c as i128).rem_euclid(m)) as u64
    }

    fn derivative_mod(&self, v: u64, m: u64) -> u64 {
        let m = m as i128;
        let v = v as i128 % m;
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0i128, |acc, (i, &c)| {
                (acc * v + (c as i128 % m) * i as i128).rem_euclid(m)
            }) as u64
    }

    /// Tries to prove irreducibility over ℚ. A rational root is a proof of
    /// reducibility and is reported as a parameter error.
    pub fn irreducibility_check(&self) -> Result<Irreducibility> {
        if let Some((a, b)) = self.rational_root()? {
            return Err(Error::parameter(format!(
                "reducible: rational root {a}/{b}"
            )));
        }
        if self.degree() <= 3 {
            return Ok(Irreducibility::RationalRootChecked);
        }
        let lc_disc = &self.disc * BigInt::from(self.leading());
        let mut tried = 0;
        let mut q = 2u64;
        while tried < 25 {
            if is_small_prime(q) && !(&lc_disc % BigInt::from(q)).is_zero() {
                tried += 1;
                if irreducible_mod(&self.coeffs, q) {
                    return Ok(Irreducibility::Certified { prime: q });
                }
            }
            q += 1;
        }
        Ok(Irreducibility::Asserted)
    }

    /// Some rational root a/b, if one exists. Constant and leading
    /// coefficients above 10^12 are refused.
    fn rational_root(&self) -> Result<Option<(i64, i64)>> {
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Ok(Some((0, 1)));
        }
        let lc = self.leading();
        if c0.unsigned_abs() > 1_000_000_000_000 || lc.unsigned_abs() > 1_000_000_000_000 {
            return Err(Error::parameter(
                "coefficients too large for the rational-root test",
            ));
        }
        let da = divisors(c0.unsigned_abs());
        let db = divisors(lc.unsigned_abs());
        for &a in &da {
            for &b in &db {
                if gcd(a, b) != 1 {
                    continue;
                }
                for sa in [a as i64, -(a as i64)] {
                    let (na, nb) = (BigInt::from(sa), BigInt::from(b));
                    let e = self.degree() as u32;
                    let val: BigInt = self
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| BigInt::from(c) * na.pow(i as u32) * nb.pow(e - i as u32))
                        .sum();
                    if val.is_zero() {
                        return Ok(Some((sa, b as i64)));
                    }
                }
            }
        }
        Ok(None)
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let body = match (i, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "x".into(),
                (1, m) => format!("{m}*x"),
                (k, 1) => format!("x^{k}"),
                (k, m) => format!("{m}*x^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

fn is_small_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// disc(p) = (-1)^{e(e-1)/2} Res(p, p') / lc(p).
fn discriminant_of(coeffs: &[i64]) -> BigInt {
    let e = coeffs.len() - 1;
    let p: Vec<BigInt> = coeffs.iter().rev().map(|&c| BigInt::from(c)).collect();
    let dp: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .map(|(i, &c)| BigInt::from(c) * BigInt::from(i))
        .collect();
    // Sylvester matrix: e-1 rows of p, e rows of p'
    let size = 2 * e - 1;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for r in 0..e - 1 {
        for (j, c) in p.iter().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..e {
        for (j, c) in dp.iter().enumerate() {
            m[e - 1 + r][r + j] = c.clone();
        }
    }
    let res = bareiss_det(m);
    let lc = BigInt::from(coeffs[e]);
    let d = res / lc;
    if (e * (e - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

// Polynomials over 𝔽_q as ascending coefficient vectors.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv = mod_inv(m[dm], q).expect("monic modulus");
    while r.len() > dm {
        let top = r.len() - 1;
        let f = (r[top] as u128 * inv as u128 % q as u128) as u64;
        for (i, &c) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = ((r[idx] as u128 + q as u128 - (f as u128 * c as u128 % q as u128))
                % q as u128) as u64;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % q as u128) as u64;
        }
    }
    poly_rem(&out, m, q)
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// Distinct-degree test: p is irreducible mod q iff gcd(x^{q^i} - x, p) = 1
/// for 1 <= i <= e/2 (p squarefree mod q since q ∤ lc·disc).
fn irreducible_mod(coeffs: &[i64], q: u64) -> bool {
    let m: Vec<u64> = coeffs
        .iter()
        .map(|&c| (c as i128).rem_euclid(q as i128) as u64)
        .collect();
    let e = m.len() - 1;
    let x = vec![0u64, 1];
    let mut h = poly_rem(&x, &m, q);
    for _ in 1..=e / 2 {
        // h <- h^q
        let mut base = h.clone();
        let mut acc = vec![1u64];
        let mut exp = q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = poly_mulmod(&acc, &base, &m, q);
            }
            base = poly_mulmod(&base, &base, &m, q);
            exp >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + q - 1) % q;
        trim(&mut diff);
        if diff.is_empty() || poly_gcd(&diff, &m, q).len() > 1 {
            return false;
        }
    }
    true
}

fn parse_int_poly(expr: &str) -> Result<Vec<i64>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parameter("empty polynomial"));
    }
    let bad = |msg: &str| Error::parameter(format!("cannot parse polynomial {expr:?}: {msg}"));
    let mut coeffs: Vec<i64> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(bad("expected + or -"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coef: Option<i64> = if i > start {
            Some(
                s[start..i]
                    .parse()
                    .map_err(|_| bad("coefficient out of range"))?,
            )
        } else {
            None
        };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut power = 0usize;
        if i < bytes.len() && bytes[i] == b'x' {
            i += 1;
            power = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let ps = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                power = s[ps..i].parse().map_err(|_| bad("bad exponent"))?;
                if power > 64 {
                    return Err(bad("degree above 64"));
                }
            }
        } else if coef.is_none() {
            return Err(bad("expected a coefficient or x"));
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        let c = coef
            .unwrap_or(1)
            .checked_mul(sign)
            .ok_or_else(|| bad("overflow"))?;
        coeffs[power] = coeffs[power]
            .checked_add(c)
            .ok_or_else(|| bad("overflow"))?;
    }
    Ok(coeffs)
}

/// All v in [0, q) with p(v) ≡ 0 mod q, scanning with a forward-difference
/// table (e additions per step).
pub fn roots_mod_prime(poly: &IntPoly, q: u64) -> Vec<u64> {
    let e = poly.degree();
    // Δ^j p(0) from p(0..=e)
    let mut diff: Vec<u64> = (0..=e as u64).map(|v| poly.eval_mod(v, q)).collect();
    for j in 1..=e {
        for i in (j..=e).rev() {
            diff[i] = (diff[i] + q - diff[i - 1]) % q;
        }
    }
    let mut out = Vec::new();
    for v in 0..q {
        if diff[0] == 0 {
            out.push(v);
        }
        for j in 0..e {
            let s = diff[j] + diff[j + 1];
            diff[j] = if s >= q { s - q } else { s };
        }
    }
    out
}

/// Roots mod q^k, sorted.
pub fn lift_roots(poly: &IntPoly, q: u64, k: u32) -> Vec<u64> {
    lift_from(poly, q, k, roots_mod_prime(poly, q))
}

fn lift_from(poly: &IntPoly, q: u64, k: u32, base: Vec<u64>) -> Vec<u64> {
    let simple = !(poly.discriminant() % BigInt::from(q)).is_zero();
    let mut roots = base;
    let mut modulus = q;
    for _ in 1..k {
        let next_mod = modulus * q;
        let mut next = Vec::new();
        for &v in &roots {
            let dv = poly.derivative_mod(v, q);
            if simple && dv != 0 {
                let inv = mod_inv(dv, q).unwrap();
                let pv = poly.eval_mod(v, next_mod);
                // p(v) ≡ 0 mod q^j, so p(v)/q^j is an integer mod q
                let t = ((pv / modulus) % q) as u128 * inv as u128 % q as u128;
                let w =
                    (v as u128 + (q as u128 - t) % q as u128 * modulus as u128) % next_mod as u128;
                next.push(w as u64);
            } else {
                for t in 0..q {
                    let w = v + t * modulus;
                    if poly.eval_mod(w, next_mod) == 0 {
                        next.push(w);
                    }
                }
            }
        }
        next.sort_unstable();
        roots = next;
        modulus = next_mod;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

/// Roots of p modulo every n <= N in CSR layout.
#[derive(Debug, Clone)]
pub struct RootTable {
    poly: IntPoly,
    n_max: u64,
    /// roots(n) = roots[offsets[n]..offsets[n+1]], for n = 0..=N (n = 0 empty).
    offsets: Vec<u64>,
    roots: Vec<u32>,
}

impl RootTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn roots(&self, n: u64) -> &[u32] {
        let (a, b) = (self.offsets[n as usize], self.offsets[n as usize + 1]);
        &self.roots[a as usize..b as usize]
    }

    pub fn rho(&self, n: u64) -> u64 {
        self.offsets[n as usize + 1] - self.offsets[n as usize]
    }

    /// Σ_{n<=x} ρ(n).
    pub fn rho_sum(&self, x: u64) -> u64 {
        self.offsets[x as usize + 1]
    }

    pub fn total(&self) -> u64 {
        self.roots.len() as u64
    }
}

/// Root table for n <= N via roots at prime powers combined by CRT.
pub fn build_root_table(
    poly: &IntPoly,
    sieve: &PrimeSieve,
    n_max: u64,
    allow_large: bool,
) -> Result<RootTable> {
    if n_max == 0 {
        return Err(Error::parameter("root table needs N >= 1"));
    }
    sieve.check_covers(n_max)?;
    if n_max > LARGE_TABLE_N && !allow_large {
        return Err(Error::resource(format!(
            "root table to N = {n_max} exceeds {LARGE_TABLE_N}; opt in to build it"
        )));
    }
    if n_max >= 1 << 32 {
        return Err(Error::resource("root table needs N < 2^32"));
    }
    let primes = sieve.primes_between(2, n_max);
    // roots mod q^a for every prime power <= N
    let levels: Vec<Vec<Vec<u64>>> = primes
        .par_iter()
        .map(|&q| {
            let q = q as u64;
            let mut per = Vec::new();
            let base = roots_mod_prime(poly, q);
            let mut a = 1u32;
            let mut qa = q;
            per.push(base.clone());
            while qa <= n_max / q {
                qa *= q;
                a += 1;
                let prev = per.last().unwrap();
                if prev.is_empty() {
                    per.push(Vec::new());
                    continue;
                }
                per.push(lift_from(poly, q, a, base.clone()));
            }
            per
        })
        .collect();

    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<(Vec<u64>, Vec<u32>)> = (0..n_max.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(n_max);
            let mut counts = Vec::with_capacity((hi - lo + 1) as usize);
            let mut roots = Vec::new();
            for n in lo..=hi {
                let mut acc: Vec<u64> = vec![0];
                let mut modulus = 1u64;
                let mut m = n;
                while m > 1 && !acc.is_empty() {
                    let q = sieve.spf(m);
                    let mut a = 0usize;
                    let mut qa = 1u64;
                    while m % q == 0 {
                        m /= q;
                        a += 1;
                        qa *= q;
                    }
                    let idx = primes.partition_point(|&p| (p as u64) < q);
                    let local = &levels[idx][a - 1];
                    let inv = mod_inv(modulus % qa, qa).unwrap_or(0);
                    let mut next = Vec::with_capacity(acc.len() * local.len());
                    for &x in &acc {
                        for &y in local {
                            // z ≡ x mod modulus, z ≡ y mod qa
                            let t = ((y + qa - x % qa) % qa) as u128 * inv as u128 % qa as u128;
                            next.push(x + (t as u64) * modulus);
                        }
                    }
                    acc = next;
                    modulus *= qa;
                }
                acc.sort_unstable();
                counts.push(acc.len() as u64);
                roots.extend(acc.iter().map(|&v| v as u32));
            }
            (counts, roots)
        })
        .collect();

    let mut offsets = Vec::with_capacity(n_max as usize + 2);
    offsets.push(0);
    offsets.push(0);
    let mut roots = Vec::new();
    for (counts, r) in chunks {
        for c in counts {
            let last = *offsets.last().unwrap();
            offsets.push(last + c);
        }
        roots.extend(r);
    }
    Ok(RootTable {
        poly: poly.clone(),
        n_max,
        offsets,
        roots,
    })
}

/// The ratios v/n ordered by n, then v.
#[derive(Debug, Clone)]
pub struct RatioSequence {
    pub entries: Vec<(u32, u64, FracFixed)>,
}

impl RatioSequence {
    pub fn from_table(table: &RootTable) -> Self {
        let mut entries = Vec::with_capacity(table.total() as usize);
        for n in 1..=table.n_max() {
            for &v in table.roots(n) {
                entries.push((v, n, FracFixed::from_ratio(v as i128, n as u128)));
            }
        }
        RatioSequence { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoStats {
    #[serde(rename = "N")]
    pub n: u64,
    /// Σ_{n<=N} ρ(n) / N.
    pub mean_ratio: f64,
    /// Σ_{n<=N/2} ρ(n) / (N/2).
    pub mean_ratio_half: f64,
    /// Σ ρ(n)² / (N (log N)^A).
    pub second_moment_ratio: f64,
    #[serde(rename = "A")]
    pub a: f64,
    /// Sampled pairs with ρ(mn) > D^{|disc|} ρ(m) ρ(n).
    pub submult_violations: u64,
    /// Sampled coprime pairs with ρ(mn) != ρ(m) ρ(n).
    pub mult_violations: u64,
    pub pairs_tested: u64,
    /// max_{2<=n<=N} log ρ(n) / log n.
    pub max_log_rho_ratio: f64,
}

/// Mean values and sampled multiplicativity checks of ρ.
pub fn rho_stats(
    table: &RootTable,
    a: f64,
    d_const: f64,
    samples: u64,
    seed: u64,
) -> Result<RhoStats> {
    let n = table.n_max();
    if n < 4 {
        return Err(Error::parameter("rho_stats needs N >= 4"));
    }
    let half = n / 2;
    let second: f64 = block_sum(1..n as usize + 1, |m| (table.rho(m as u64) as f64).powi(2));
    let log_n = (n as f64).ln();
    let disc_abs = table
        .poly()
        .discriminant()
        .abs()
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let factor = d_const.powf(disc_abs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sub, mut mult, mut tested) = (0u64, 0u64, 0u64);
    let root_n = ((n as f64).sqrt() as u64).max(2);
    while tested < samples {
        let m = rng.random_range(1..=root_n);
        let k = rng.random_range(1..=n / m);
        tested += 1;
        let (rm, rk, rmk) = (
            table.rho(m) as f64,
            table.rho(k) as f64,
            table.rho(m * k) as f64,
        );
        if rmk > factor * rm * rk {
            sub += 1;
        }
        if gcd(m, k) == 1 && rmk != rm * rk {
            mult += 1;
        }
    }
    let max_log = (2..=n)
        .filter(|&m| table.rho(m) > 0)
        .map(|m| (table.rho(m) as f64).ln() / (m as f64).ln())
        .fold(0.0, f64::max);
    Ok(RhoStats {
        n,
        mean_ratio: table.rho_sum(n) as f64 / n as f64,
        mean_ratio_half: table.rho_sum(half) as f64 / half as f64,
        second_moment_ratio: second / (n as f64 * log_n.powf(a)),
        a,
        submult_violations: sub,
        mult_violations: mult,
        pairs_tested: tested,
        max_log_rho_ratio: max_log,
    })
}

/// Number of sampled coprime pairs (m, n), mn <= N, with ρ(mn) != ρ(m)ρ(n).
pub fn multiplicativity_violations(table: &RootTable, pairs: u64, seed: u64) -> (u64, u64) {
    let n = table.n_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bad, mut tested) = (0, 0);
    let root_n = ((n as f64).sqrt() as u64).max(2);
    while tested < pairs {
        let m = rng.random_range(1..=root_n);
        let k = rng.random_range(1..=n / m);
        if gcd(m, k) != 1 {
            continue;
        }
        tested += 1;
        if table.rho(m * k) != table.rho(m) * table.rho(k) {
            bad += 1;
        }
    }
    (bad, tested)
}

/// (r/N) Σ_{m <= N/r} χ(m) ρ(rm).
pub fn twisted_rho_mean(
    table: &RootTable,
    chi: &DirichletCharacter,
    r: u64,
    n_max: u64,
) -> Result<Complex64> {
    if r == 0 || r > n_max {
        return Err(Error::parameter("need 1 <= r <= N"));
    }
    if n_max > table.n_max() {
        return Err(Error::parameter(format!(
            "root table covers N = {}, asked for {n_max}",
            table.n_max()
        )));
    }
    let chi_table = chi.table();
    let k = chi.modulus() as usize;
    let top = (n_max / r) as usize;
    let s = block_sum(1..top + 1, |m| {
        chi_table[m % k] * table.rho(r * m as u64) as f64
    });
    Ok(s * (r as f64 / n_max as f64))
}

/// Whether f divides disc(p).
pub fn divides_disc(poly: &IntPoly, f: u64) -> bool {
    poly.discriminant().is_multiple_of(&BigInt::from(f))
}
