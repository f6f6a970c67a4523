//! Dirichlet characters, conductors, mixed and complete character sums, and
//! the character decomposition of Σ f(n) e(F(n)) at rational phases.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, lcm, mod_pow, trial_factor};
use crate::error::{Error, Result};
use crate::numeric::{block_sum, pairwise, unit_root};
use crate::phase::{dirichlet_approx, PolyPhase, RationalApprox};

/// Largest modulus accepted by [`CharGroup::new`].
pub const MAX_MODULUS: u64 = 1_000_000;

const NOT_UNIT: u32 = u32::MAX;

/// One prime-power factor of (ℤ/kℤ)^×.
#[derive(Debug, Clone)]
struct Block {
    modulus: u64,
    /// Index of the first generator slot owned by this block.
    slot: usize,
    /// Discrete logs: for cyclic blocks the exponent of the generator, for
    /// 2^a with a >= 3 the packed pair e0 · order(5) + e1 with
    /// x ≡ (-1)^e0 5^e1. `NOT_UNIT` off the units.
    dlog: Vec<u32>,
    two_power: bool,
}

/// The group (ℤ/kℤ)^× with an explicit generator decomposition.
#[derive(Debug, Clone)]
pub struct CharGroup {
    k: u64,
    factors: Vec<(u64, u32)>,
    blocks: Vec<Block>,
    /// Order of each generator slot.
    orders: Vec<u64>,
    /// Generators (as residues mod their prime power) of each slot.
    generators: Vec<u64>,
    /// lcm of the slot orders: every angle is a multiple of 1/lcm.
    exponent: u64,
    phi: u64,
}

fn primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let qs: Vec<u64> = trial_factor(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists")
}

impl CharGroup {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::parameter("character modulus must be >= 1"));
        }
        if k > MAX_MODULUS {
            return Err(Error::resource(format!(
                "character modulus {k} above limit {MAX_MODULUS}"
            )));
        }
        let factors = trial_factor(k);
        let mut blocks = Vec::new();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        for &(p, a) in &factors {
            let m = p.pow(a);
            let mut dlog = vec![NOT_UNIT; m as usize];
            let slot = orders.len();
            if p == 2 && a >= 3 {
                let ord5 = m / 4;
                let mut x = 1u64;
                for e in 0..ord5 {
                    dlog[x as usize] = e as u32;
                    dlog[(m - x) as usize] = (ord5 + e) as u32;
                    x = x * 5 % m;
                }
                orders.extend([2, ord5]);
                generators.extend([m - 1, 5]);
                blocks.push(Block {
                    modulus: m,
                    slot,
                    dlog,
                    two_power: true,
                });
            } else {
                let phi = (p - 1) * p.pow(a - 1);
                let g = if p == 2 {
                    // (ℤ/2)^× trivial, (ℤ/4)^× generated by -1
                    m - 1
                } else {
                    let g = primitive_root_mod_prime(p);
                    if a >= 2 && mod_pow(g, p - 1, p * p) == 1 {
                        g + p
                    } else {
                        g
                    }
                };
                let mut x = 1u64;
                for e in 0..phi {
                    dlog[x as usize] = e as u32;
                    x = x * g % m;
                }
                orders.push(phi);
                generators.push(g % m);
                blocks.push(Block {
                    modulus: m,
                    slot,
                    dlog,
                    two_power: false,
                });
            }
        }
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));
        let phi = orders.iter().product();
        Ok(CharGroup {
            k,
            factors,
            blocks,
            orders,
            generators,
            exponent,
            phi,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.k
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Orders of the generator slots, in enumeration order.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Common denominator of all character angles.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Discrete-log vector of n, or `None` if gcd(n, k) > 1.
    pub fn dlog(&self, n: u64) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.orders.len()];
        for b in &self.blocks {
            let l = b.dlog[(n % b.modulus) as usize];
            if l == NOT_UNIT {
                return None;
            }
            if b.two_power {
                let ord5 = self.orders[b.slot + 1];
                out[b.slot] = l as u64 / ord5;
                out[b.slot + 1] = l as u64 % ord5;
            } else {
                out[b.slot] = l as u64;
            }
        }
        Some(out)
    }

    /// All φ(k) characters, principal first, ordered lexicographically by
    /// exponent vector.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        (0..self.phi).map(|i| self.character(i)).collect()
    }

    /// The `index`-th character in enumeration order.
    pub fn character(self: &Arc<Self>, index: u64) -> DirichletCharacter {
        let mut rest = index % self.phi.max(1);
        let mut exps = vec![0u64; self.orders.len()];
        for s in (0..self.orders.len()).rev() {
            exps[s] = rest % self.orders[s];
            rest /= self.orders[s];
        }
        DirichletCharacter {
            group: Arc::clone(self),
            exponents: exps,
        }
    }
}

/// A character mod k given by exponents on the group's generators:
/// χ(g_s) = e(e_s / order_s).
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<CharGroup>,
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn new(group: Arc<CharGroup>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != group.orders.len() {
            return Err(Error::parameter(format!(
                "expected {} exponents, got {}",
                group.orders.len(),
                exponents.len()
            )));
        }
        let exponents = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &o)| e % o)
            .collect();
        Ok(DirichletCharacter { group, exponents })
    }

    /// Principal character mod k.
    pub fn principal(k: u64) -> Result<Self> {
        let g = Arc::new(CharGroup::new(k)?);
        Ok(g.character(0))
    }

    pub fn group(&self) -> &Arc<CharGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.k
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Position in the group's enumeration order.
    pub fn index(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.group.orders)
            .fold(0, |acc, (&e, &o)| acc * o + e)
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// χ(n) = e(angle / exponent), or `None` when gcd(n, k) > 1.
    pub fn angle(&self, n: u64) -> Option<u64> {
        let g = &*self.group;
        let mut acc = 0u128;
        for b in &g.blocks {
            let l = b.dlog[(n % b.modulus) as usize];
            if l == NOT_UNIT {
                return None;
            }
            let (s, l) = (b.slot, l as u64);
            if b.two_power {
                let ord5 = g.orders[s + 1];
                acc += (self.exponents[s] * (l / ord5) * (g.exponent / 2)) as u128;
                acc += (self.exponents[s + 1] as u128 * (l % ord5) as u128)
                    * (g.exponent / ord5) as u128;
            } else {
                acc += (self.exponents[s] as u128 * l as u128) * (g.exponent / g.orders[s]) as u128;
            }
        }
        Some((acc % g.exponent as u128) as u64)
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.angle(n) {
            Some(a) => unit_root(a as i128, self.group.exponent as u128),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(n) for n = 0..k-1.
    pub fn table(&self) -> Vec<Complex64> {
        (0..self.modulus()).map(|n| self.value(n)).collect()
    }

    pub fn conj(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    /// Smallest f | k such that χ is trivial on units ≡ 1 mod f.
    pub fn conductor(&self) -> u64 {
        let k = self.modulus();
        let mut divisors: Vec<u64> = (1..=k)
            .filter(|d| d * d <= k && k.is_multiple_of(*d))
            .flat_map(|d| [d, k / d])
            .collect();
        divisors.sort_unstable();
        divisors.dedup();
        for f in divisors {
            let trivial = (0..k / f)
                .map(|t| 1 + t * f)
                .all(|x| self.angle(x % k).is_none_or(|a| a == 0));
            if trivial {
                return f;
            }
        }
        k
    }
}

/// The characters mod k in enumeration order.
pub fn enumerate_characters(k: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(Arc::new(CharGroup::new(k)?).characters())
}

/// Σ_{n<=N} χ(n) e(F(n)).
pub fn mixed_char_sum(
    chi: &DirichletCharacter,
    phase: &PolyPhase,
    n_max: u64,
) -> Result<Complex64> {
    phase.check_range(n_max)?;
    let table = chi.table();
    let k = chi.modulus();
    Ok(block_sum(1..n_max as usize + 1, |n| {
        table[n % k as usize] * phase.exp_at(n as i128)
    }))
}

/// Work limit for [`complete_twisted_sum`] (period times degree).
pub const TWISTED_WORK_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct TwistedSum {
    /// Summation period lcm(k, q).
    pub period: u64,
    pub sum: Complex64,
    /// |sum| / √period.
    pub normalized: f64,
}

/// Σ_{x mod m} χ(x) e(P(x)/q) with m = lcm(k, q), so that the summand is
/// m-periodic. `poly` holds integer coefficients in ascending order.
pub fn complete_twisted_sum(chi: &DirichletCharacter, poly: &[i64], q: u64) -> Result<TwistedSum> {
    if q == 0 {
        return Err(Error::parameter("q must be >= 1"));
    }
    let m = lcm(chi.modulus(), q);
    let deg = poly.len().max(1) as u64;
    if m.saturating_mul(deg) > TWISTED_WORK_LIMIT {
        return Err(Error::resource(format!(
            "complete sum needs {m} x {deg} steps, limit {TWISTED_WORK_LIMIT}"
        )));
    }
    let l = chi.group.exponent as u128;
    let qq = q as i128;
    let sum = block_sum(0..m as usize, |x| {
        let Some(a) = chi.angle(x as u64 % chi.modulus()) else {
            return Complex64::new(0.0, 0.0);
        };
        let xr = x as i128 % qq;
        let b = poly
            .iter()
            .rev()
            .fold(0i128, |acc, &c| (acc * xr + c as i128).rem_euclid(qq));
        unit_root(a as i128 * qq + b * l as i128, l * q as u128)
    });
    Ok(TwistedSum {
        period: m,
        sum,
        normalized: sum.norm() / (m as f64).sqrt(),
    })
}

/// Guard for the modulus k = lcm(s_ℓ) of a decomposition.
pub const MAX_DECOMPOSITION_MODULUS: u64 = 1_000_000;
/// Work limit for the character-expansion cross-check.
pub const CHARACTER_EXPANSION_WORK: u64 = 2_000_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct PretentiousDecomposition {
    #[serde(rename = "N")]
    pub n: u64,
    pub u: u64,
    /// The bounds R_ℓ used for each approximation.
    pub r_bounds: Vec<f64>,
    /// (r_ℓ, s_ℓ) approximations, ℓ = 1..d.
    pub approximations: Vec<RationalApprox>,
    pub k: u64,
    /// F₁(x) = Σ_ℓ (r_ℓ/s_ℓ) x^ℓ as numerators over k.
    pub f1_numerators: Vec<u128>,
    /// S(a) for a = 1..k (index a - 1).
    #[serde(skip)]
    pub s_direct: Vec<Complex64>,
    #[serde(skip)]
    pub s_character: Option<Vec<Complex64>>,
    /// Σ_{n<=u} f(n) e(F₁(n)).
    pub t_direct: Complex64,
    /// Σ_{a<=k} e(F₁(a)) S(a).
    pub t_decomposed: Complex64,
    /// Same with S(a) from the character expansion.
    pub t_character: Option<Complex64>,
    pub max_s_discrepancy: Option<f64>,
    /// max |T_direct - T_other| / max(|T_direct|, 1).
    pub relative_discrepancy: f64,
}

/// Decomposes T(u) for a caller-chosen rational phase Σ (r_ℓ/s_ℓ) x^ℓ.
pub fn decompose_rational(
    values: &[Complex64],
    fractions: &[(u128, u128)],
    u: u64,
) -> Result<PretentiousDecomposition> {
    if (values.len() as u64) <= u {
        return Err(Error::parameter("coefficient array does not cover u"));
    }
    let mut k = 1u64;
    for &(_, s) in fractions {
        if s == 0 {
            return Err(Error::parameter("zero denominator in rational phase"));
        }
        if s > MAX_DECOMPOSITION_MODULUS as u128 || lcm(k, s as u64) > MAX_DECOMPOSITION_MODULUS {
            let list: Vec<String> = fractions.iter().map(|f| f.1.to_string()).collect();
            return Err(Error::resource(format!(
                "decomposition refused: k = lcm({}) exceeds {MAX_DECOMPOSITION_MODULUS}",
                list.join(", ")
            )));
        }
        k = lcm(k, s as u64);
    }
    let kk = k as u128;
    let f1: Vec<u128> = fractions.iter().map(|&(r, s)| (r % s) * (kk / s)).collect();
    // e(F₁(a)) depends only on a mod k
    let phases: Vec<Complex64> = (0..k)
        .map(|a| {
            let mut num = 0u128;
            let mut pw = 1u128;
            for &c in &f1 {
                pw = pw * a as u128 % kk;
                num = (num + c * pw) % kk;
            }
            unit_root(num as i128, kk)
        })
        .collect();

    let t_direct = block_sum(1..u as usize + 1, |n| values[n] * phases[n % k as usize]);
    let mut s_direct = vec![Complex64::new(0.0, 0.0); k as usize];
    for n in 1..=u as usize {
        s_direct[(n - 1) % k as usize] += values[n];
    }
    let t_terms: Vec<Complex64> = (0..k as usize)
        .map(|i| phases[(i + 1) % k as usize] * s_direct[i])
        .collect();
    let t_decomposed = pairwise(&t_terms);

    let s_character = character_expansion(values, k, u)?;
    let (t_character, max_s_discrepancy) = match &s_character {
        Some(sc) => {
            let terms: Vec<Complex64> = (0..k as usize)
                .map(|i| phases[(i + 1) % k as usize] * sc[i])
                .collect();
            let md = sc
                .iter()
                .zip(&s_direct)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            (Some(pairwise(&terms)), Some(md))
        }
        None => (None, None),
    };
    let scale = t_direct.norm().max(1.0);
    let mut rel = (t_direct - t_decomposed).norm() / scale;
    if let Some(tc) = t_character {
        rel = rel.max((t_direct - tc).norm() / scale);
    }
    Ok(PretentiousDecomposition {
        n: u,
        u,
        r_bounds: Vec::new(),
        approximations: Vec::new(),
        k,
        f1_numerators: f1,
        s_direct,
        s_character,
        t_direct,
        t_decomposed,
        t_character,
        max_s_discrepancy,
        relative_discrepancy: rel,
    })
}

/// S(a) = (1/φ(k')) Σ_{ψ mod k'} ψ̄(a') Σ_{m <= u/d} ψ(m) f(dm) with
/// d = gcd(a, k), k' = k/d, a' = a/d. `None` when over the work limit.
fn character_expansion(values: &[Complex64], k: u64, u: u64) -> Result<Option<Vec<Complex64>>> {
    let divisors: Vec<u64> = (1..=k).filter(|d| k.is_multiple_of(*d)).collect();
    let mut work = 0u64;
    for &d in &divisors {
        let kp = k / d;
        let phi = crate::arith::FactoredInteger {
            n: kp,
            factors: trial_factor(kp),
        }
        .euler_phi();
        work = work.saturating_add(phi.saturating_mul(kp + phi));
    }
    if work > CHARACTER_EXPANSION_WORK {
        return Ok(None);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); k as usize];
    for &d in &divisors {
        let kp = k / d;
        let group = Arc::new(CharGroup::new(kp)?);
        let chars = group.characters();
        let mut buckets = vec![Complex64::new(0.0, 0.0); kp as usize];
        for m in 1..=u / d {
            buckets[(m % kp) as usize] += values[(d * m) as usize];
        }
        let units: Vec<u64> = (0..kp).filter(|&c| gcd(c, kp) == 1).collect();
        let inner: Vec<Complex64> = chars
            .par_iter()
            .map(|psi| {
                let terms: Vec<Complex64> = units
                    .iter()
                    .map(|&c| psi.value(c) * buckets[c as usize])
                    .collect();
                pairwise(&terms)
            })
            .collect();
        let phi = chars.len() as f64;
        // a = d a' with gcd(a', k') = 1 and 1 <= a <= k
        let targets: Vec<u64> = (1..=kp).filter(|&ap| gcd(ap, kp) == 1).collect();
        let vals: Vec<Complex64> = targets
            .par_iter()
            .map(|&ap| {
                let terms: Vec<Complex64> = chars
                    .iter()
                    .zip(&inner)
                    .map(|(psi, w)| psi.value(ap % kp).conj() * w)
                    .collect();
                pairwise(&terms) / phi
            })
            .collect();
        for (&ap, v) in targets.iter().zip(vals) {
            out[(d * ap - 1) as usize] = v;
        }
    }
    Ok(Some(out))
}

/// Approximates each α_ℓ with R_ℓ = max(N^ℓ / (log N)^{4r²+4rA}, 1) and
/// decomposes T(N) along k = lcm(s_ℓ).
pub fn pretentious_decompose(
    values: &[Complex64],
    phase: &PolyPhase,
    n_max: u64,
    r: u32,
    a: f64,
) -> Result<PretentiousDecomposition> {
    if n_max < 3 {
        return Err(Error::parameter("decomposition needs N >= 3"));
    }
    if r == 0 || a.is_nan() || a < 0.0 {
        return Err(Error::parameter("decomposition needs r >= 1 and A >= 0"));
    }
    let log_n = (n_max as f64).ln();
    let mut r_bounds = Vec::new();
    let mut approximations = Vec::new();
    for ell in 1..=phase.degree() {
        let rb = ((n_max as f64).powi(ell as i32)
            / log_n.powf(4.0 * (r * r) as f64 + 4.0 * r as f64 * a))
        .max(1.0);
        let mut ap = dirichlet_approx(phase.coeff(ell), rb)?;
        ap.ell = ell;
        r_bounds.push(rb);
        approximations.push(ap);
    }
    let fractions: Vec<(u128, u128)> = approximations.iter().map(|ap| (ap.a, ap.q)).collect();
    let mut out = decompose_rational(values, &fractions, n_max)?;
    out.n = n_max;
    out.r_bounds = r_bounds;
    out.approximations = approximations;
    Ok(out)
}

/// Work limit (k-sum of φ(k) times N) for [`pretentious_witness`].
pub const WITNESS_WORK_LIMIT: u64 = 20_000_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub k: u64,
    pub chi_index: u64,
    pub exponents: Vec<u64>,
    pub u: u64,
    pub value: f64,
}

/// Maximizes |Σ_{n<=u} ψ(n) f(n)| over k <= k_max, ψ mod k and u <= N.
/// Ties go to the smallest k, then the earliest character, then the
/// smallest u.
pub fn pretentious_witness(values: &[Complex64], n_max: u64, k_max: u64) -> Result<Witness> {
    if (values.len() as u64) <= n_max || n_max == 0 {
        return Err(Error::parameter("coefficient array does not cover 1..N"));
    }
    if k_max == 0 || k_max > 10_000 {
        return Err(Error::parameter("k_max must lie in [1, 10^4]"));
    }
    let phi_sum: u64 = (1..=k_max)
        .map(|k| {
            crate::arith::FactoredInteger {
                n: k,
                factors: trial_factor(k),
            }
            .euler_phi()
        })
        .sum();
    if phi_sum.saturating_mul(n_max) > WITNESS_WORK_LIMIT {
        return Err(Error::resource(format!(
            "witness search needs {} character-prefix steps, limit {WITNESS_WORK_LIMIT}",
            phi_sum.saturating_mul(n_max)
        )));
    }
    let per_k: Vec<Witness> = (1..=k_max)
        .into_par_iter()
        .map(|k| -> Result<Witness> {
            let group = Arc::new(CharGroup::new(k)?);
            let mut best: Option<Witness> = None;
            for psi in group.characters() {
                let table = psi.table();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut top = (f64::NEG_INFINITY, 0u64);
                for n in 1..=n_max {
                    acc += table[(n % k) as usize] * values[n as usize];
                    let m = acc.norm();
                    if m > top.0 {
                        top = (m, n);
                    }
                }
                if best.as_ref().is_none_or(|b| top.0 > b.value) {
                    best = Some(Witness {
                        k,
                        chi_index: psi.index(),
                        exponents: psi.exponents().to_vec(),
                        u: top.1,
                        value: top.0,
                    });
                }
            }
            Ok(best.expect("at least one character"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<Witness> = None;
    for w in per_k {
        if best.as_ref().is_none_or(|b| w.value > b.value) {
            best = Some(w);
        }
    }
    Ok(best.expect("k_max >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeSieve;
    use crate::multfunc::MultiplicativeFunction;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn small_groups() {
        let c4 = enumerate_characters(4).unwrap();
        assert_eq!(c4.len(), 2);
        assert!(c4[0].is_principal());
        assert!(close(c4[1].value(3), Complex64::new(-1.0, 0.0), 1e-15));
        let c1 = enumerate_characters(1).unwrap();
        assert_eq!(c1.len(), 1);
        for n in 0..10 {
            assert_eq!(c1[0].value(n), Complex64::new(1.0, 0.0));
        }
        let c5 = enumerate_characters(5).unwrap();
        assert_eq!(c5.len(), 4);
        assert_eq!(c5[0].group().generators(), &[2]);
        for chi in &c5 {
            let z = chi.value(2);
            assert!(close(z.powu(4), Complex64::new(1.0, 0.0), 1e-12));
        }
        for k in [8u64, 16, 24, 720] {
            assert_eq!(
                enumerate_characters(k).unwrap().len() as u64,
                CharGroup::new(k).unwrap().phi()
            );
        }
    }

    #[test]
    fn multiplicative_and_periodic() {
        for k in [7u64, 8, 12, 16, 45, 64] {
            for chi in enumerate_characters(k).unwrap() {
                assert_eq!(chi.value(1), Complex64::new(1.0, 0.0));
                for m in 0..2 * k {
                    for n in 0..k {
                        assert!(close(chi.value(m * n), chi.value(m) * chi.value(n), 1e-12));
                    }
                    assert_eq!(chi.value(m) == Complex64::new(0.0, 0.0), gcd(m, k) > 1);
                }
            }
        }
    }

    #[test]
    fn conductor_examples() {
        let c12 = enumerate_characters(12).unwrap();
        assert_eq!(c12[0].conductor(), 1);
        let c8 = enumerate_characters(8).unwrap();
        // induced from the mod-4 character: χ(3) = χ(7) = -1, χ(5) = 1
        let induced = c8
            .iter()
            .find(|c| c.value(5) == Complex64::new(1.0, 0.0) && !c.is_principal())
            .unwrap();
        assert_eq!(induced.conductor(), 4);
        for chi in enumerate_characters(5).unwrap().iter().skip(1) {
            assert_eq!(chi.conductor(), 5);
        }
    }

    #[test]
    fn mixed_sum_examples() {
        let c4 = enumerate_characters(4).unwrap();
        let zero = PolyPhase::zero();
        assert!(mixed_char_sum(&c4[1], &zero, 4).unwrap().norm() < 1e-12);
        let triv = DirichletCharacter::principal(1).unwrap();
        assert_eq!(mixed_char_sum(&triv, &zero, 100).unwrap().re, 100.0);
        let half = PolyPhase::parse("x/2").unwrap();
        assert!(mixed_char_sum(&c4[1], &half, 8).unwrap().norm() < 1e-12);
    }

    #[test]
    fn complete_sum_examples() {
        let c7 = enumerate_characters(7).unwrap();
        assert!(complete_twisted_sum(&c7[3], &[0], 7).unwrap().sum.norm() < 1e-12);
        let p5 = DirichletCharacter::principal(5).unwrap();
        assert!(close(
            complete_twisted_sum(&p5, &[0, 1], 5).unwrap().sum,
            Complex64::new(-1.0, 0.0),
            1e-12
        ));
        let triv = DirichletCharacter::principal(1).unwrap();
        let t = complete_twisted_sum(&triv, &[0, 1], 5).unwrap();
        assert_eq!(t.period, 5);
        assert!(t.sum.norm() < 1e-12);
        let quad = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.exponents() == [2])
            .unwrap();
        let g = complete_twisted_sum(&quad, &[0, 1], 5).unwrap();
        assert!((g.sum.norm() - 5f64.sqrt()).abs() < 1e-9);
        assert!((g.normalized - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decompose_half() {
        // R = N/(log N)^4 >= 2 needs N around 10^5
        let s = PrimeSieve::new(100_000).unwrap();
        let v = MultiplicativeFunction::liouville()
            .sieve_values(&s, 100_000)
            .unwrap();
        let d =
            pretentious_decompose(&v, &PolyPhase::parse("x/2").unwrap(), 100_000, 1, 0.0).unwrap();
        assert_eq!(d.k, 2);
        assert!(d.relative_discrepancy < 1e-12);
        assert!(d.max_s_discrepancy.unwrap() < 1e-9);
    }

    #[test]
    fn decompose_twelve() {
        let s = PrimeSieve::new(100_000).unwrap();
        let v = MultiplicativeFunction::mobius()
            .sieve_values(&s, 100_000)
            .unwrap();
        let f = PolyPhase::parse("x^2/3 + x/4").unwrap();
        let d = pretentious_decompose(&v, &f, 100_000, 1, 0.0).unwrap();
        assert_eq!(d.k, 12);
        assert!(d.relative_discrepancy < 1e-9);
    }

    #[test]
    fn decompose_golden_small_bound() {
        let s = PrimeSieve::new(10_000).unwrap();
        let v = MultiplicativeFunction::mobius()
            .sieve_values(&s, 10_000)
            .unwrap();
        let f = PolyPhase::parse("golden*x").unwrap();
        let d = pretentious_decompose(&v, &f, 10_000, 2, 0.0).unwrap();
        assert_eq!(d.r_bounds, vec![1.0]);
        assert_eq!(d.k, 1);
        assert!(d.relative_discrepancy < 1e-9);
        let d = pretentious_decompose(&v, &f, 10_000, 1, 0.0).unwrap();
        assert!([1u64, 2, 3, 5, 8, 13, 21, 34, 55, 89].contains(&d.k));
    }

    #[test]
    fn decompose_refuses_large_k() {
        let v = vec![Complex64::new(1.0, 0.0); 11];
        let err = decompose_rational(&v, &[(1, 1009), (1, 1013)], 10).unwrap_err();
        assert!(matches!(err, Error::Resource(ref m) if m.contains("1009") && m.contains("1013")));
    }

    #[test]
    fn witness_examples() {
        let n = 2000u64;
        let ones: Vec<Complex64> = (0..=n)
            .map(|i| Complex64::new(if i == 0 { 0.0 } else { 1.0 }, 0.0))
            .collect();
        let w = pretentious_witness(&ones, n, 12).unwrap();
        assert_eq!((w.k, w.chi_index, w.u), (1, 0, n));
        assert_eq!(w.value, n as f64);

        let chi = enumerate_characters(3).unwrap()[1].clone();
        let f: Vec<Complex64> = (0..=n)
            .map(|i| {
                if i == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    chi.value(i).conj()
                }
            })
            .collect();
        let w = pretentious_witness(&f, n, 12).unwrap();
        assert_eq!((w.k, w.chi_index), (3, 1));
        let coprime = (1..=n).filter(|i| i % 3 != 0).count() as f64;
        assert!((w.value - coprime).abs() < 1e-9);
    }
}
