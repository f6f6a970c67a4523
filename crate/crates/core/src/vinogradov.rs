//! Exact counts of Vinogradov systems
//! v_1^j + ... + v_r^j = v_{r+1}^j + ... + v_{2r}^j (1 <= j <= d)
//! through the power-sum distribution N_r(λ) and J = Σ_λ N_r(λ)².

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::PrimeSieve;
use crate::error::{Error, Result};

/// Largest dense λ-lattice the convolution will allocate.
pub const DENSE_STATE_LIMIT: u128 = 100_000_000;
/// Largest number of r-multisets the sparse path will enumerate.
pub const SPARSE_STATE_LIMIT: u128 = 20_000_000;

/// Variables range over an integer interval or an explicit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// Integers lo..=hi.
    Range(u64, u64),
    Set(Vec<u64>),
}

impl Domain {
    fn values(&self) -> Vec<u64> {
        match self {
            Domain::Range(lo, hi) => (*lo..=*hi).collect(),
            Domain::Set(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

fn power_vector(v: u64, d: u32) -> Vec<i128> {
    let mut out = Vec::with_capacity(d as usize);
    let mut acc: i128 = 1;
    for _ in 0..d {
        acc *= v as i128;
        out.push(acc);
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

enum Store {
    Dense {
        shift: Vec<i128>,
        sizes: Vec<usize>,
        data: Vec<u64>,
    },
    Sparse(HashMap<Vec<i128>, u64>),
}

/// N_r(λ) for every power-sum vector λ reachable by r variables.
pub struct TupleCountTable {
    pub r: u32,
    pub d: u32,
    pub domain_size: usize,
    store: Store,
}

impl TupleCountTable {
    /// Σ_λ N_r(λ) (equals |domain|^r).
    pub fn total(&self) -> u128 {
        match &self.store {
            Store::Dense { data, .. } => data.iter().map(|&c| c as u128).sum(),
            Store::Sparse(map) => map.values().map(|&c| c as u128).sum(),
        }
    }

    /// Σ_λ N_r(λ)², the number of solutions of the 2r-variable system.
    pub fn sum_squares(&self) -> u128 {
        match &self.store {
            Store::Dense { data, .. } => data
                .par_chunks(1 << 16)
                .map(|c| c.iter().map(|&x| (x as u128) * (x as u128)).sum::<u128>())
                .sum(),
            Store::Sparse(map) => map.values().map(|&c| (c as u128) * (c as u128)).sum(),
        }
    }

    /// N_r(λ), zero for unreachable λ.
    pub fn get(&self, lambda: &[i128]) -> u64 {
        match &self.store {
            Store::Dense { shift, sizes, data } => {
                let mut idx = 0usize;
                for (j, &l) in lambda.iter().enumerate() {
                    let c = l - shift[j];
                    if c < 0 || c >= sizes[j] as i128 {
                        return 0;
                    }
                    idx = idx * sizes[j] + c as usize;
                }
                data[idx]
            }
            Store::Sparse(map) => map.get(lambda).copied().unwrap_or(0),
        }
    }

    /// Nonzero (λ, N_r(λ)) pairs in ascending λ order.
    pub fn entries(&self) -> Vec<(Vec<i128>, u64)> {
        let mut out: Vec<(Vec<i128>, u64)> = match &self.store {
            Store::Dense { shift, sizes, data } => data
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(mut idx, &c)| {
                    let mut lambda = vec![0i128; sizes.len()];
                    for j in (0..sizes.len()).rev() {
                        lambda[j] = (idx % sizes[j]) as i128 + shift[j];
                        idx /= sizes[j];
                    }
                    (lambda, c)
                })
                .collect(),
            Store::Sparse(map) => map.iter().map(|(k, &v)| (k.clone(), v)).collect(),
        };
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Dense { data, .. } => data.iter().filter(|&&c| c > 0).count(),
            Store::Sparse(map) => map.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense { .. })
    }
}

/// Tabulates N_r(λ) by r-fold convolution of the one-variable distribution.
pub fn count_tuples(domain: &Domain, r: u32, d: u32) -> Result<TupleCountTable> {
    if r == 0 || d == 0 {
        return Err(Error::parameter("count_tuples needs r >= 1 and d >= 1"));
    }
    let values = domain.values();
    let size = values.len();
    if size == 0 {
        return Ok(TupleCountTable {
            r,
            d,
            domain_size: 0,
            store: Store::Sparse(HashMap::new()),
        });
    }
    let vmax = *values.last().unwrap();
    let vmin = values[0];
    if d >= 2 && (vmax as f64).log2() * d as f64 + (r as f64).log2() > 120.0 {
        return Err(Error::parameter("power sums exceed 120 bits"));
    }
    if (size as u128)
        .checked_pow(r)
        .is_none_or(|t| t >= 1u128 << 64)
    {
        return Err(Error::resource(format!(
            "|domain|^r = {size}^{r} does not fit 64-bit counts"
        )));
    }

    let shift: Vec<i128> = power_vector(vmin, d)
        .iter()
        .map(|&x| x * r as i128)
        .collect();
    let spans: Vec<u128> = power_vector(vmax, d)
        .iter()
        .zip(power_vector(vmin, d))
        .map(|(&hi, lo)| (hi - lo) as u128 * r as u128 + 1)
        .collect();
    let dense_states = spans
        .iter()
        .try_fold(1u128, |acc, &s| acc.checked_mul(s))
        .unwrap_or(u128::MAX);
    let multisets = binomial(size as u128 + r as u128 - 1, r as u128);
    let use_dense = if dense_states <= DENSE_STATE_LIMIT {
        dense_states <= multisets.saturating_mul(64) || multisets > SPARSE_STATE_LIMIT
    } else if multisets <= SPARSE_STATE_LIMIT {
        false
    } else {
        return Err(Error::resource(format!(
            "state space too large: dense lattice {dense_states} states (limit {DENSE_STATE_LIMIT}), \
             {multisets} multisets (limit {SPARSE_STATE_LIMIT})"
        )));
    };

    let offsets: Vec<Vec<i128>> = values
        .iter()
        .map(|&v| {
            power_vector(v, d)
                .iter()
                .zip(power_vector(vmin, d))
                .map(|(&a, b)| a - b)
                .collect()
        })
        .collect();

    let store = if use_dense {
        let sizes: Vec<usize> = spans.iter().map(|&s| s as usize).collect();
        Store::Dense {
            data: dense_convolve(&sizes, &offsets, r),
            sizes,
            shift,
        }
    } else {
        let mut map: HashMap<Vec<i128>, u64> = HashMap::new();
        map.insert(vec![0; d as usize], 1);
        for _ in 0..r {
            let mut next: HashMap<Vec<i128>, u64> = HashMap::with_capacity(map.len() * 2);
            for (lambda, &c) in &map {
                for off in &offsets {
                    let key: Vec<i128> = lambda.iter().zip(off).map(|(a, b)| a + b).collect();
                    *next.entry(key).or_insert(0) += c;
                }
            }
            map = next;
        }
        let map = map
            .into_iter()
            .map(|(k, v)| (k.iter().zip(&shift).map(|(a, b)| a + b).collect(), v))
            .collect();
        Store::Sparse(map)
    };
    Ok(TupleCountTable {
        r,
        d,
        domain_size: size,
        store,
    })
}

/// Dense convolution on the mixed-radix lattice, λ₁ outermost. Each step
/// writes target λ₁-slices in parallel; a slice only reads the previous
/// array, so writes are disjoint.
fn dense_convolve(sizes: &[usize], offsets: &[Vec<i128>], r: u32) -> Vec<u64> {
    let total: usize = sizes.iter().product();
    let slice = total / sizes[0];
    // flat offset inside a λ₁-slice for each value
    let inner: Vec<(usize, usize)> = offsets
        .iter()
        .map(|off| {
            let mut idx = 0usize;
            for j in 1..sizes.len() {
                idx = idx * sizes[j] + off[j] as usize;
            }
            (off[0] as usize, idx)
        })
        .collect();
    let mut cur = vec![0u64; total];
    cur[0] = 1;
    for step in 0..r as usize {
        let mut next = vec![0u64; total];
        let reach = (step + 1) * inner.iter().map(|x| x.0).max().unwrap_or(0);
        next.par_chunks_mut(slice).enumerate().for_each(|(t, dst)| {
            if t > reach {
                return;
            }
            for &(a, b) in &inner {
                if a > t {
                    continue;
                }
                let src = &cur[(t - a) * slice..(t - a + 1) * slice];
                for (x, &c) in src[..slice - b].iter().enumerate() {
                    if c != 0 {
                        dst[x + b] += c;
                    }
                }
            }
        });
        cur = next;
    }
    cur
}

/// J_{r,d}(V): solutions with every variable in [1, V].
pub fn jrd(v: u64, r: u32, d: u32) -> Result<u128> {
    if v == 0 {
        return Ok(0);
    }
    Ok(count_tuples(&Domain::Range(1, v), r, d)?.sum_squares())
}

/// Σ_k J over the intervals (lo, hi]: all 2r variables share one interval.
pub fn jrd_intervals(intervals: &[(u64, u64)], r: u32, d: u32) -> Result<u128> {
    let mut sorted = intervals.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[1].0 < w[0].1 {
            return Err(Error::parameter(format!(
                "intervals ({}, {}] and ({}, {}] overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    let mut total = 0u128;
    for &(lo, hi) in intervals {
        if hi <= lo {
            return Err(Error::parameter(format!("empty interval ({lo}, {hi}]")));
        }
        total += count_tuples(&Domain::Range(lo + 1, hi), r, d)?.sum_squares();
    }
    Ok(total)
}

/// Solutions with every variable a prime in [Y, Y + X].
pub fn jrd_primes(y: u64, x: u64, r: u32, d: u32, sieve: &PrimeSieve) -> Result<u128> {
    sieve.check_covers(y + x)?;
    let primes: Vec<u64> = sieve
        .primes_between(y, y + x)
        .iter()
        .map(|&p| p as u64)
        .collect();
    if primes.is_empty() {
        return Ok(0);
    }
    Ok(count_tuples(&Domain::Set(primes), r, d)?.sum_squares())
}

/// log(J(V_large)/J(V_small)) / log(V_large/V_small).
pub fn slope_estimate(r: u32, d: u32, v_small: u64, v_large: u64) -> Result<f64> {
    if v_small == 0 || v_small >= v_large {
        return Err(Error::parameter("slope needs 0 < V_small < V_large"));
    }
    let a = jrd(v_small, r, d)? as f64;
    let b = jrd(v_large, r, d)? as f64;
    Ok((b / a).ln() / (v_large as f64 / v_small as f64).ln())
}
