//! Multiplicative functions, their norm profile, and the extremal
//! construction showing the N / log N term cannot be removed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::PrimeSieve;
use crate::error::{Error, Result};
use crate::phase::PolyPhase;
use crate::weylsum::weyl_sum;

pub type PrimeRule = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;
pub type PowerRule = Arc<dyn Fn(u64, u32) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Kind {
    /// Completely multiplicative: f(p^k) = rule(p)^k.
    Complete(PrimeRule),
    /// Multiplicative with f(p^k) given by a rule.
    PrimePowerRule(PowerRule),
    /// Multiplicative with f(p^k) looked up in a finite table.
    PrimePowerTable(BTreeMap<(u64, u32), Complex64>),
}

/// A multiplicative function with f(1) = 1, described by its values on
/// prime powers.
#[derive(Clone)]
pub struct MultiplicativeFunction {
    label: String,
    kind: Kind,
}

impl fmt::Debug for MultiplicativeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeFunction")
            .field("label", &self.label)
            .field(
                "completely_multiplicative",
                &self.completely_multiplicative(),
            )
            .finish()
    }
}

impl MultiplicativeFunction {
    pub fn new(label: impl Into<String>, kind: Kind) -> Self {
        MultiplicativeFunction {
            label: label.into(),
            kind,
        }
    }

    pub fn complete<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(label, Kind::Complete(Arc::new(rule)))
    }

    pub fn unit() -> Self {
        Self::complete("unit", |_| Complex64::new(1.0, 0.0))
    }

    pub fn liouville() -> Self {
        Self::complete("liouville", |_| Complex64::new(-1.0, 0.0))
    }

    pub fn mobius() -> Self {
        Self::new(
            "mobius",
            Kind::PrimePowerRule(Arc::new(|_, k| {
                if k == 1 {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })),
        )
    }

    /// Built-in function by name: `unit`, `mobius` or `liouville`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "unit" | "one" => Ok(Self::unit()),
            "mobius" | "moebius" | "mu" => Ok(Self::mobius()),
            "liouville" | "lambda" => Ok(Self::liouville()),
            other => Err(Error::parameter(format!(
                "unknown multiplicative function '{other}'"
            ))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn completely_multiplicative(&self) -> bool {
        matches!(self.kind, Kind::Complete(_))
    }

    pub fn at_prime_power(&self, p: u64, k: u32) -> Result<Complex64> {
        match &self.kind {
            Kind::Complete(rule) => Ok(rule(p).powu(k)),
            Kind::PrimePowerRule(rule) => Ok(rule(p, k)),
            Kind::PrimePowerTable(table) => table.get(&(p, k)).copied().ok_or_else(|| {
                Error::Evaluation(format!("no value for f({p}^{k}) in table '{}'", self.label))
            }),
        }
    }

    /// `values[n] = f(n)` for `1 <= n <= N`; `values[0]` is 0.
    ///
    /// One pass over the smallest-prime-factor table: each `n` is split as
    /// `p^k · m` with `p` its least prime and `f(n) = f(p^k) f(m)`.
    pub fn sieve_values(&self, sieve: &PrimeSieve, n_max: u64) -> Result<Vec<Complex64>> {
        sieve.check_covers(n_max)?;
        let len = n_max as usize + 1;
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        if n_max == 0 {
            return Ok(values);
        }
        values[1] = Complex64::new(1.0, 0.0);
        // prime-power part of n with respect to its smallest prime
        let mut pp = vec![0u32; len];
        let mut exp = vec![0u8; len];
        for n in 2..len {
            let p = sieve.spf(n as u64) as usize;
            let m = n / p;
            if m > 1 && m.is_multiple_of(p) {
                pp[n] = pp[m] * p as u32;
                exp[n] = exp[m] + 1;
            } else {
                pp[n] = p as u32;
                exp[n] = 1;
            }
            let q = pp[n] as usize;
            values[n] = if q == n {
                match &self.kind {
                    Kind::Complete(_) if exp[n] > 1 => values[n / p] * values[p],
                    _ => self.at_prime_power(p as u64, exp[n] as u32)?,
                }
            } else {
                values[q] * values[n / q]
            };
        }
        Ok(values)
    }
}

/// Norm data of a materialized multiplicative function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormProfile {
    /// max |f(p)| over primes p <= N.
    #[serde(rename = "C")]
    pub c_bound: f64,
    /// Σ|f(n)| / N.
    pub ell1_ratio: f64,
    /// Σ|f(n)|² / (N (log N)^A).
    pub ell2_ratio: f64,
    #[serde(rename = "A")]
    pub ell2_exponent: f64,
    #[serde(rename = "N")]
    pub n: u64,
}

pub fn norm_stats(values: &[Complex64], sieve: &PrimeSieve, a: f64) -> Result<NormProfile> {
    if values.len() < 2 {
        return Err(Error::parameter("norm_stats needs at least f(1)"));
    }
    let n = (values.len() - 1) as u64;
    sieve.check_covers(n)?;
    let c_bound = sieve
        .primes_between(2, n)
        .iter()
        .map(|&p| values[p as usize].norm())
        .fold(0.0, f64::max);
    let ell1: f64 = values[1..].iter().map(|v| v.norm()).sum();
    let ell2: f64 = values[1..].iter().map(|v| v.norm_sqr()).sum();
    let log_factor = if n >= 2 { (n as f64).ln().powf(a) } else { 1.0 };
    Ok(NormProfile {
        c_bound,
        ell1_ratio: ell1 / n as f64,
        ell2_ratio: ell2 / (n as f64 * log_factor),
        ell2_exponent: a,
        n,
    })
}

/// Outcome of the extremal construction.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub z0: Complex64,
    /// Arc angle of z0 in [0, 2π).
    pub angle: f64,
    pub f: MultiplicativeFunction,
    /// Σ_{n<=N} f(n) e(F(n)) for the constructed f.
    pub sum_value: Complex64,
    /// π(N) - π(N/2).
    pub lower_bound: f64,
    /// N / (10 log N).
    pub log_bound: f64,
    /// G(0) = e(F(1)) + π(N) - π(N/2).
    pub g_at_zero: Complex64,
    /// G(z0) rebuilt from its definition.
    pub g_at_z0: Complex64,
    /// max |G| over the initial grid.
    pub grid_max: f64,
    pub grid_size: usize,
    /// Coefficients of G as a polynomial in z (degree max Ω(n)).
    pub g_coefficients: Vec<Complex64>,
    /// Set when the grid is too coarse to certify the refinement.
    pub warning: Option<String>,
}

/// Grid size used when the caller does not choose one.
pub fn default_grid_size(n: u64) -> usize {
    4096usize.max(8 * n as usize)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Builds f with f(p) = z0 (p <= N/2), f(p) = e(-F(p)) (p > N/2), where z0
/// maximizes |G| on the unit circle,
///
/// G(z) = Σ_{n<=N} z^{Ω(n)} e(F(n)) + Σ_{N/2<p<=N} (1 - z e(F(p))).
///
/// G is a polynomial in z of degree max Ω(n) <= log2 N, so it is collapsed
/// to its coefficients once and then evaluated on the grid and during the
/// golden-section refinement.
pub fn extremal_construct(
    phase: &PolyPhase,
    sieve: &PrimeSieve,
    n_max: u64,
    grid_size: usize,
) -> Result<ExtremalResult> {
    if n_max < 100 {
        return Err(Error::parameter("extremal construction needs N >= 100"));
    }
    if grid_size < 256 {
        return Err(Error::parameter("grid_size must be >= 256"));
    }
    sieve.check_covers(n_max)?;
    phase.check_range(n_max)?;

    let mut omega = vec![0u32; n_max as usize + 1];
    for n in 2..=n_max as usize {
        omega[n] = omega[n / sieve.spf(n as u64) as usize] + 1;
    }
    let degree = *omega.iter().max().unwrap() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for n in 1..=n_max {
        coeffs[omega[n as usize] as usize] += phase.exp_at(n as i128);
    }
    let large_primes = sieve.primes_between(n_max / 2 + 1, n_max);
    let count = large_primes.len() as f64;
    coeffs[0] += Complex64::new(count, 0.0);
    for &p in large_primes {
        coeffs[1] -= phase.exp_at(p as i128);
    }

    let tau = std::f64::consts::TAU;
    let at = |theta: f64| horner(&coeffs, Complex64::from_polar(1.0, theta)).norm();
    let step = tau / grid_size as f64;
    let mut best_idx = 0usize;
    let mut grid_max = f64::NEG_INFINITY;
    for i in 0..grid_size {
        let v = at(i as f64 * step);
        if v > grid_max {
            grid_max = v;
            best_idx = i;
        }
    }

    // Golden-section search on [θ* - step, θ* + step].
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_idx as f64 * step - step, best_idx as f64 * step + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (at(x1), at(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = at(x1);
        }
    }
    let refined = 0.5 * (lo + hi);
    let mut angle = if at(refined) >= grid_max {
        refined
    } else {
        best_idx as f64 * step
    };
    angle = angle.rem_euclid(tau);
    let z0 = Complex64::from_polar(1.0, angle);

    let half = n_max / 2;
    let rule_phase = phase.clone();
    let f = MultiplicativeFunction::complete(format!("extremal(N={n_max})"), move |p| {
        if p <= half {
            z0
        } else {
            rule_phase.exp_at(p as i128).conj()
        }
    });
    let values = f.sieve_values(sieve, n_max)?;
    let sum_value = weyl_sum(&values, phase, n_max)?;

    // G(z0) straight from its definition, independent of the coefficient form.
    let mut direct = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        direct += z0.powu(omega[n as usize]) * phase.exp_at(n as i128);
    }
    for &p in large_primes {
        direct += Complex64::new(1.0, 0.0) - z0 * phase.exp_at(p as i128);
    }

    let warning = (grid_size < 8 * degree.max(1)).then(|| {
        format!(
            "grid of {grid_size} points is below 8·deg G = {}",
            8 * degree
        )
    });
    let nf = n_max as f64;
    Ok(ExtremalResult {
        z0,
        angle,
        f,
        sum_value,
        lower_bound: count,
        log_bound: nf / (10.0 * nf.ln()),
        g_at_zero: coeffs[0],
        g_at_z0: direct,
        grid_max,
        grid_size,
        g_coefficients: coeffs,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sieve_value_examples() {
        let s = PrimeSieve::new(100).unwrap();
        let l = MultiplicativeFunction::liouville()
            .sieve_values(&s, 6)
            .unwrap();
        assert_eq!(&l[1..], &[c(1.), c(-1.), c(-1.), c(1.), c(-1.), c(1.)]);
        let m = MultiplicativeFunction::mobius()
            .sieve_values(&s, 4)
            .unwrap();
        assert_eq!(&m[1..], &[c(1.), c(-1.), c(-1.), c(0.)]);
        let u = MultiplicativeFunction::unit().sieve_values(&s, 50).unwrap();
        assert!(u[1..].iter().all(|&v| v == c(1.)));
    }

    #[test]
    fn table_kind_reports_missing_entry() {
        let s = PrimeSieve::new(100).unwrap();
        let mut table = BTreeMap::new();
        table.insert((2, 1), c(0.5));
        table.insert((3, 1), c(2.0));
        let f = MultiplicativeFunction::new("t", Kind::PrimePowerTable(table));
        let v = f.sieve_values(&s, 3).unwrap();
        assert_eq!(v[2], c(0.5));
        let err = f.sieve_values(&s, 4).unwrap_err();
        assert!(matches!(err, Error::Evaluation(ref m) if m.contains("f(2^2)")));
    }

    #[test]
    fn sieve_values_are_multiplicative() {
        let s = PrimeSieve::new(20_000).unwrap();
        let f = MultiplicativeFunction::new(
            "twisted",
            Kind::PrimePowerRule(Arc::new(|p, k| {
                Complex64::from_polar(1.0 / k as f64, (p as f64).sqrt() * k as f64)
            })),
        );
        let v = f.sieve_values(&s, 20_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 200 {
            let m = rng.random_range(1..=140u64);
            let n = rng.random_range(1..=140u64);
            if crate::arith::gcd(m, n) != 1 {
                continue;
            }
            let lhs = v[(m * n) as usize];
            let rhs = v[m as usize] * v[n as usize];
            assert!((lhs - rhs).norm() < 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn norm_examples() {
        let s = PrimeSieve::new(10_000).unwrap();
        let u = MultiplicativeFunction::unit()
            .sieve_values(&s, 100)
            .unwrap();
        assert_eq!(norm_stats(&u, &s, 0.0).unwrap().ell1_ratio, 1.0);
        let m = MultiplicativeFunction::mobius()
            .sieve_values(&s, 10_000)
            .unwrap();
        let p = norm_stats(&m, &s, 0.0).unwrap();
        assert!((p.ell1_ratio - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.02);
        let l = MultiplicativeFunction::liouville()
            .sieve_values(&s, 777)
            .unwrap();
        assert_eq!(norm_stats(&l, &s, 1.0).unwrap().c_bound, 1.0);
    }

    #[test]
    fn extremal_zero_phase() {
        let s = PrimeSieve::new(1000).unwrap();
        let r = extremal_construct(&PolyPhase::zero(), &s, 1000, 8000).unwrap();
        // |G| is flat to second order at the maximum, so the angle is only
        // resolved to about sqrt(machine epsilon)
        assert!((r.z0 - c(1.0)).norm() < 1e-7);
        assert!((r.sum_value.norm() - 1000.0).abs() < 1e-9);
        assert!(r.sum_value.norm() >= r.lower_bound);
    }

    #[test]
    fn extremal_sqrt2_linear() {
        let s = PrimeSieve::new(1000).unwrap();
        let phase = PolyPhase::parse("sqrt:2*x").unwrap();
        let r = extremal_construct(&phase, &s, 1000, default_grid_size(1000)).unwrap();
        assert_eq!(r.lower_bound, 73.0);
        assert!(r.sum_value.norm() >= 73.0);
        assert!(r.sum_value.norm() >= r.log_bound);
        assert!((r.z0.norm() - 1.0).abs() < 1e-12);
        // Σ f(n)e(F(n)) = G(z0)
        assert!((r.sum_value - r.g_at_z0).norm() <= 1e-9 * r.g_at_z0.norm());
        assert!(r.g_at_z0.norm() >= r.grid_max - 1e-9);
        assert!(r.warning.is_none());
    }

    #[test]
    fn extremal_guards() {
        let s = PrimeSieve::new(1000).unwrap();
        assert!(extremal_construct(&PolyPhase::zero(), &s, 99, 4096).is_err());
        assert!(extremal_construct(&PolyPhase::zero(), &s, 500, 255).is_err());
    }
}
