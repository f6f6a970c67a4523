//! Deterministic summation helpers.
//!
//! Every parallel sum in the crate goes through [`block_sum`]: the index
//! range is cut into fixed blocks of [`BLOCK`] indices, each block is summed
//! sequentially, and the block partials are combined by a fixed pairwise
//! tree. The result depends only on the input, never on the thread count.

use std::ops::{Add, Range};

use num_complex::Complex64;
use rayon::prelude::*;

pub const BLOCK: usize = 4096;

/// Pairwise (cascade) reduction of a slice in a fixed tree order.
pub fn pairwise<T>(values: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    match values.len() {
        0 => T::default(),
        1 => values[0],
        len => {
            let mid = len / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

/// Sum `term(i)` over `range` with the fixed block/pairwise contract.
pub fn block_sum<T, F>(range: Range<usize>, term: F) -> T
where
    T: Copy + Default + Add<Output = T> + Send,
    F: Fn(usize) -> T + Sync,
{
    if range.is_empty() {
        return T::default();
    }
    let start = range.start;
    let len = range.end - start;
    let blocks = len.div_ceil(BLOCK);
    let partials: Vec<T> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = start + b * BLOCK;
            let hi = (lo + BLOCK).min(range.end);
            (lo..hi).fold(T::default(), |acc, i| acc + term(i))
        })
        .collect();
    pairwise(&partials)
}

/// e(x) = exp(2πi x) for an exact rational angle `num / den`.
///
/// The numerator is reduced into (-den/2, den/2] first so that the angle fed
/// to the trigonometric functions is as small as possible.
pub fn unit_root(num: i128, den: u128) -> Complex64 {
    debug_assert!(den > 0);
    let den_i = den as i128;
    let mut r = num.rem_euclid(den_i);
    if 2 * r > den_i {
        r -= den_i;
    }
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let theta = std::f64::consts::TAU * (r as f64 / den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_sum_matches_closed_form() {
        let s: f64 = block_sum(0..10_001, |i| i as f64);
        assert_eq!(s, 10_000.0 * 10_001.0 / 2.0);
    }

    #[test]
    fn block_sum_is_thread_independent() {
        let f = |i: usize| Complex64::new((i as f64).sin(), (i as f64 * 0.37).cos());
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a: Complex64 = one.install(|| block_sum(1..100_000, f));
        let b: Complex64 = four.install(|| block_sum(1..100_000, f));
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn unit_root_quarter_turns() {
        assert_eq!(unit_root(0, 7), Complex64::new(1.0, 0.0));
        let i = unit_root(1, 4);
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let m = unit_root(-2, 4);
        assert!((m + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
