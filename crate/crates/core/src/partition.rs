//! Dyadic partition of the hyperbola region {(p, n) : p prime, pn <= N}
//! into rectangles R_i, R_{i,j,k} and an exceptional set.
//!
//! Band i is the strip N/2^{i+1} < n <= N/2^i. Its main rectangle R_i takes
//! p <= 2^i; the rest of the strip (2^i < p <= N/n) is filled by the
//! staircase boxes R_{i,j,k}, level j refining the strip into 2^{j-1} boxes
//! indexed by 2^{j-1} < k <= 2^j. Whatever the boxes up to level J_i miss is
//! the exceptional set.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::PrimeSieve;
use crate::error::{Error, Result};
use crate::numeric::{block_sum, pairwise};

pub type Q128 = Ratio<u128>;

/// Largest N for which the lattice verification is attempted.
pub const MAX_VERIFY_N: u64 = 1 << 26;

/// (p_lo, p_hi] × (n_lo, n_hi] with exact rational sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub p_lo: Q128,
    pub p_hi: Q128,
    pub n_lo: Q128,
    pub n_hi: Q128,
}

fn q(num: u128, den: u128) -> Q128 {
    Ratio::new(num, den)
}

fn to_f64(x: &Q128) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Rectangle {
    /// Sides given as numerator/denominator pairs.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_lo: u128,
        p_lo_den: u128,
        p_hi: u128,
        p_hi_den: u128,
        n_lo: u128,
        n_lo_den: u128,
        n_hi: u128,
        n_hi_den: u128,
    ) -> Self {
        Rectangle {
            p_lo: q(p_lo, p_lo_den),
            p_hi: q(p_hi, p_hi_den),
            n_lo: q(n_lo, n_lo_den),
            n_hi: q(n_hi, n_hi_den),
        }
    }

    pub fn contains(&self, p: u64, n: u64) -> bool {
        let (p, n) = (Q128::from(p as u128), Q128::from(n as u128));
        self.p_lo < p && p <= self.p_hi && self.n_lo < n && n <= self.n_hi
    }

    /// Integers p with p_lo < p <= p_hi, as a closed range (empty if lo > hi).
    pub fn p_lattice(&self) -> (u64, u64) {
        (
            self.p_lo.to_integer() as u64 + 1,
            self.p_hi.to_integer() as u64,
        )
    }

    pub fn n_lattice(&self) -> (u64, u64) {
        (
            self.n_lo.to_integer() as u64 + 1,
            self.n_hi.to_integer() as u64,
        )
    }

    pub fn p_width_exact(&self) -> Q128 {
        self.p_hi - self.p_lo
    }

    pub fn n_width_exact(&self) -> Q128 {
        self.n_hi - self.n_lo
    }

    pub fn p_width(&self) -> f64 {
        to_f64(&self.p_width_exact())
    }

    pub fn n_width(&self) -> f64 {
        to_f64(&self.n_width_exact())
    }

    pub fn p_lo_f64(&self) -> f64 {
        to_f64(&self.p_lo)
    }

    pub fn p_hi_f64(&self) -> f64 {
        to_f64(&self.p_hi)
    }

    pub fn n_lo_f64(&self) -> f64 {
        to_f64(&self.n_lo)
    }

    pub fn n_hi_f64(&self) -> f64 {
        to_f64(&self.n_hi)
    }
}

impl Serialize for Rectangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let show = |x: &Q128| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        [
            show(&self.p_lo),
            show(&self.p_hi),
            show(&self.n_lo),
            show(&self.n_hi),
        ]
        .serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubRect {
    pub i: u32,
    pub j: u32,
    pub k: u64,
    pub rect: Rectangle,
}

#[derive(Debug, Clone)]
pub struct PartitionScheme {
    pub n: u64,
    pub s: f64,
    pub main_rects: Vec<(u32, Rectangle)>,
    pub sub_rects: Vec<SubRect>,
    /// J_i for i = 0..=⌊log₂N⌋.
    pub j_widths: Vec<u32>,
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// J_i = min(i+1, ⌊log₂N⌋ − i + 1, ⌊log₂(64N/s)/2⌋).
pub fn j_width(n: u64, s: f64, i: u32) -> u32 {
    let l = floor_log2(n);
    // largest t with s·4^t <= 64N
    let cap = 64.0 * n as f64;
    let mut t = 0u32;
    while s * 4f64.powi(t as i32 + 1) <= cap {
        t += 1;
    }
    (i + 1).min((l + 1).saturating_sub(i)).min(t)
}

/// R_i = (0, 2^i] × (N/2^{i+1}, N/2^i].
pub fn main_rectangle(n: u64, i: u32) -> Rectangle {
    Rectangle {
        p_lo: Q128::zero(),
        p_hi: q(1u128 << i, 1),
        n_lo: q(n as u128, 1u128 << (i + 1)),
        n_hi: q(n as u128, 1u128 << i),
    }
}

/// R_{i,j,k} = (2^{i+j}/k, 2^{i+j+1}/(2k−1)] × ((k−1)N/2^{i+j}, (2k−1)N/2^{i+j+1}].
pub fn sub_rectangle(n: u64, i: u32, j: u32, k: u64) -> Rectangle {
    let m = i + j;
    let k = k as u128;
    let n = n as u128;
    Rectangle {
        p_lo: q(1u128 << m, k),
        p_hi: q(1u128 << (m + 1), 2 * k - 1),
        n_lo: q((k - 1) * n, 1u128 << m),
        n_hi: q((2 * k - 1) * n, 1u128 << (m + 1)),
    }
}

/// Builds R_i for 0 <= i <= ⌊log₂N⌋ and R_{i,j,k} for 1 <= j <= J_i,
/// 2^{j−1} < k <= 2^j.
///
/// The box with k = 2^{j−1} coincides with R_{i+1,j−1,2^{j−1}} (or, for
/// j = 1, overlaps R_{i+1}), so it is left out of every level.
pub fn build_partition(n: u64, s: f64) -> Result<PartitionScheme> {
    if n < 64 {
        return Err(Error::parameter(format!(
            "partition needs N >= 64, got {n}"
        )));
    }
    if n > 1 << 40 {
        return Err(Error::parameter("partition needs N <= 2^40"));
    }
    if !(1.0..=n as f64).contains(&s) {
        return Err(Error::parameter(format!("s = {s} outside [1, N]")));
    }
    let l = floor_log2(n);
    let mut main_rects = Vec::new();
    let mut sub_rects = Vec::new();
    let mut j_widths = Vec::new();
    for i in 0..=l {
        main_rects.push((i, main_rectangle(n, i)));
        let ji = j_width(n, s, i);
        j_widths.push(ji);
        for j in 1..=ji {
            for k in (1u64 << (j - 1)) + 1..=1u64 << j {
                sub_rects.push(SubRect {
                    i,
                    j,
                    k,
                    rect: sub_rectangle(n, i, j, k),
                });
            }
        }
    }
    Ok(PartitionScheme {
        n,
        s,
        main_rects,
        sub_rects,
        j_widths,
    })
}

impl PartitionScheme {
    pub fn all_rects(&self) -> impl Iterator<Item = &Rectangle> {
        self.main_rects
            .iter()
            .map(|(_, r)| r)
            .chain(self.sub_rects.iter().map(|s| &s.rect))
    }
}

/// Dense index of the hyperbola lattice: point (p, n) of the `pi`-th prime
/// sits at `offsets[pi] + n - 1`.
struct Lattice<'a> {
    primes: &'a [u32],
    offsets: Vec<usize>,
}

impl<'a> Lattice<'a> {
    fn new(sieve: &'a PrimeSieve, n: u64) -> Self {
        let primes = sieve.primes_between(2, n);
        let mut offsets = Vec::with_capacity(primes.len() + 1);
        let mut acc = 0usize;
        for &p in primes {
            offsets.push(acc);
            acc += (n / p as u64) as usize;
        }
        offsets.push(acc);
        Lattice { primes, offsets }
    }

    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn prime_index(&self, p: u64) -> usize {
        self.primes.partition_point(|&x| (x as u64) < p)
    }

    /// Multiplicity of every lattice point under the scheme's rectangles.
    fn coverage(&self, scheme: &PartitionScheme) -> Vec<u8> {
        let mut counts = vec![0u8; self.len()];
        for rect in scheme.all_rects() {
            let (p_lo, p_hi) = rect.p_lattice();
            let (n_lo, n_hi) = rect.n_lattice();
            if p_lo > p_hi || n_lo > n_hi {
                continue;
            }
            for idx in self.prime_index(p_lo)..self.primes.len() {
                let p = self.primes[idx] as u64;
                if p > p_hi {
                    break;
                }
                let row = self.offsets[idx + 1] - self.offsets[idx];
                let top = (n_hi as usize).min(row);
                for n in n_lo as usize..=top {
                    let c = &mut counts[self.offsets[idx] + n - 1];
                    *c = c.saturating_add(1);
                }
            }
        }
        counts
    }
}

fn check_verify(scheme: &PartitionScheme, sieve: &PrimeSieve) -> Result<()> {
    sieve.check_covers(scheme.n)?;
    if scheme.n > MAX_VERIFY_N {
        return Err(Error::resource(format!(
            "lattice verification at N = {} needs about {} points; limit is N <= {MAX_VERIFY_N}",
            scheme.n,
            (scheme.n as f64 * (scheme.n as f64).ln().ln().max(1.0)) as u64
        )));
    }
    Ok(())
}

/// Lattice points (p prime, n >= 1, pn <= N) in no rectangle, ascending in (p, n).
pub fn exceptional_points(scheme: &PartitionScheme, sieve: &PrimeSieve) -> Result<Vec<(u64, u64)>> {
    check_verify(scheme, sieve)?;
    let lat = Lattice::new(sieve, scheme.n);
    let counts = lat.coverage(scheme);
    let mut out = Vec::new();
    for (idx, &p) in lat.primes.iter().enumerate() {
        let row = &counts[lat.offsets[idx]..lat.offsets[idx + 1]];
        for (off, &c) in row.iter().enumerate() {
            if c == 0 {
                out.push((p as u64, off as u64 + 1));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: f64,
    pub direct_sum: Complex64,
    pub partitioned_sum: Complex64,
    pub rect_sum: Complex64,
    pub exceptional_sum: Complex64,
    pub max_multiplicity: u32,
    pub lattice_points: u64,
    pub exceptional_count: u64,
    pub main_count: usize,
    pub sub_count: usize,
    pub min_p_width: f64,
    pub min_n_width: f64,
    pub min_area: f64,
    /// s/256, the smallest sub-rectangle area the construction guarantees
    /// (a derived constant).
    pub area_threshold: f64,
    pub widths_ok: bool,
    pub area_ok: bool,
    /// p_hi · n_hi <= N for every sub-rectangle.
    pub hyperbola_ok: bool,
}

/// Compares the direct hyperbola sum of `weight` against the sum over the
/// rectangles plus the exceptional set, and measures rectangle dimensions.
pub fn verify_partition<W>(
    scheme: &PartitionScheme,
    sieve: &PrimeSieve,
    weight: W,
) -> Result<PartitionReport>
where
    W: Fn(u64, u64) -> Complex64 + Sync,
{
    check_verify(scheme, sieve)?;
    let n = scheme.n;
    let lat = Lattice::new(sieve, n);
    let counts = lat.coverage(scheme);
    let max_multiplicity = counts.iter().copied().max().unwrap_or(0) as u32;

    let row_sum = |p: u64, lo: u64, hi: u64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            acc += weight(p, m);
        }
        acc
    };
    let direct_sum = block_sum(0..lat.primes.len(), |idx| {
        let p = lat.primes[idx] as u64;
        row_sum(p, 1, n / p)
    });

    let rects: Vec<&Rectangle> = scheme.all_rects().collect();
    let partials: Vec<Complex64> = rects
        .par_iter()
        .map(|rect| {
            let (p_lo, p_hi) = rect.p_lattice();
            let (n_lo, n_hi) = rect.n_lattice();
            let mut acc = Complex64::new(0.0, 0.0);
            if p_lo > p_hi || n_lo > n_hi {
                return acc;
            }
            for &p in sieve.primes_between(p_lo, p_hi) {
                let p = p as u64;
                let top = n_hi.min(n / p);
                if n_lo <= top {
                    acc += row_sum(p, n_lo, top);
                }
            }
            acc
        })
        .collect();
    let rect_sum = pairwise(&partials);

    let exc_partials: Vec<Complex64> = (0..lat.primes.len())
        .into_par_iter()
        .map(|idx| {
            let p = lat.primes[idx] as u64;
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &counts[lat.offsets[idx]..lat.offsets[idx + 1]];
            for (off, &c) in row.iter().enumerate() {
                if c == 0 {
                    acc += weight(p, off as u64 + 1);
                }
            }
            acc
        })
        .collect();
    let exceptional_sum = pairwise(&exc_partials);
    let exceptional_count = counts.iter().filter(|&&c| c == 0).count() as u64;

    let quarter = q(1, 4);
    let mut min_pw: Option<Q128> = None;
    let mut min_nw: Option<Q128> = None;
    let mut min_area: Option<Q128> = None;
    let mut hyperbola_ok = true;
    for sr in &scheme.sub_rects {
        let (pw, nw) = (sr.rect.p_width_exact(), sr.rect.n_width_exact());
        let area = pw * nw;
        min_pw = Some(min_pw.map_or(pw, |m| m.min(pw)));
        min_nw = Some(min_nw.map_or(nw, |m| m.min(nw)));
        min_area = Some(min_area.map_or(area, |m| m.min(area)));
        hyperbola_ok &= sr.rect.p_hi * sr.rect.n_hi <= Q128::from(n as u128);
    }
    let area_threshold = scheme.s / 256.0;
    let widths_ok = min_pw.is_none_or(|w| w >= quarter) && min_nw.is_none_or(|w| w >= quarter);
    let min_area_f = min_area.map_or(f64::INFINITY, |a| to_f64(&a));
    Ok(PartitionReport {
        n,
        s: scheme.s,
        direct_sum,
        partitioned_sum: rect_sum + exceptional_sum,
        rect_sum,
        exceptional_sum,
        max_multiplicity,
        lattice_points: lat.len() as u64,
        exceptional_count,
        main_count: scheme.main_rects.len(),
        sub_count: scheme.sub_rects.len(),
        min_p_width: min_pw.map_or(f64::INFINITY, |w| to_f64(&w)),
        min_n_width: min_nw.map_or(f64::INFINITY, |w| to_f64(&w)),
        min_area: min_area_f,
        area_threshold,
        widths_ok,
        area_ok: min_area_f >= area_threshold,
        hyperbola_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_example() {
        assert_eq!(j_width(1024, 64.0, 3), 4);
        // s = N caps the third term at 3
        for i in 0..=10 {
            assert_eq!(j_width(1024, 1024.0, i), (i + 1).min(11 - i).min(3));
        }
    }

    #[test]
    fn rectangle_examples() {
        let r0 = main_rectangle(1000, 0);
        assert_eq!(r0, Rectangle::new(0, 1, 1, 1, 1000, 2, 1000, 1));
        let r = sub_rectangle(1000, 2, 1, 1);
        assert_eq!(r, Rectangle::new(8, 1, 16, 1, 0, 1, 1000, 16));
        assert!(r.contains(9, 62) && !r.contains(8, 1) && !r.contains(9, 63));
    }

    #[test]
    fn guards() {
        assert!(build_partition(63, 4.0).is_err());
        assert!(build_partition(1024, 0.5).is_err());
        assert!(build_partition(1024, 2048.0).is_err());
    }

    #[test]
    fn unit_weight_n100() {
        let sieve = PrimeSieve::new(100).unwrap();
        let scheme = build_partition(100, 4.0).unwrap();
        let rep = verify_partition(&scheme, &sieve, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let brute: u64 = sieve.primes().iter().map(|&p| 100 / p as u64).sum();
        assert_eq!(rep.direct_sum.re, brute as f64);
        assert_eq!(rep.partitioned_sum, rep.direct_sum);
        assert_eq!(rep.max_multiplicity, 1);
    }

    fn brute_uncovered(scheme: &PartitionScheme, sieve: &PrimeSieve) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for &p in sieve.primes_between(2, scheme.n) {
            let p = p as u64;
            for n in 1..=scheme.n / p {
                if !scheme.all_rects().any(|r| r.contains(p, n)) {
                    out.push((p, n));
                }
            }
        }
        out
    }

    #[test]
    fn exceptional_matches_membership_scan() {
        let sieve = PrimeSieve::new(1024).unwrap();
        for s in [64.0, 1024.0] {
            let scheme = build_partition(1024, s).unwrap();
            let exc = exceptional_points(&scheme, &sieve).unwrap();
            assert_eq!(exc, brute_uncovered(&scheme, &sieve));
            for &(p, n) in &exc {
                assert!(p * n <= 1024);
            }
        }
        let small = build_partition(1024, 1024.0).unwrap();
        let big = build_partition(1024, 64.0).unwrap();
        assert!(small.sub_rects.len() < big.sub_rects.len());
        assert!(
            exceptional_points(&small, &sieve).unwrap().len()
                > exceptional_points(&big, &sieve).unwrap().len()
        );
    }

    #[test]
    fn sub_rectangles_pairwise_disjoint() {
        let scheme = build_partition(4096, 4.0).unwrap();
        let rects: Vec<&Rectangle> = scheme.all_rects().collect();
        for a in 0..rects.len() {
            for b in a + 1..rects.len() {
                let (x, y) = (rects[a], rects[b]);
                let overlap = x.p_lo.max(y.p_lo) < x.p_hi.min(y.p_hi)
                    && x.n_lo.max(y.n_lo) < x.n_hi.min(y.n_hi);
                assert!(!overlap, "{x:?} overlaps {y:?}");
            }
        }
    }
}
