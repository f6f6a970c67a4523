//! The two-dimensional sequence (v/n, {F(n)}) over roots v of p mod n, its
//! Weyl sums, Hooley's average and a grid discrepancy.

use num_complex::Complex64;
use serde::Serialize;

use crate::congruence::RootTable;
use crate::error::{Error, Result};
use crate::numeric::{block_sum, unit_root};
use crate::phase::{FracFixed, PolyPhase};

/// A point (v/n, h) with an exact rational first coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointPoint {
    pub v: u64,
    pub n: u64,
    pub h: FracFixed,
}

impl JointPoint {
    pub fn g(&self) -> FracFixed {
        FracFixed::from_ratio(self.v as i128, self.n as u128)
    }
}

#[derive(Debug, Clone, Default)]
pub struct JointSequence {
    pub entries: Vec<JointPoint>,
}

impl JointSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_table(table: &RootTable, n_max: u64) -> Result<()> {
    if n_max > table.n_max() {
        return Err(Error::parameter(format!(
            "root table covers N = {}, asked for {n_max}",
            table.n_max()
        )));
    }
    Ok(())
}

/// For each n ascending and each root v ascending, the pair (v/n, {F(n)}).
pub fn joint_sequence(table: &RootTable, phase: &PolyPhase, n_max: u64) -> Result<JointSequence> {
    check_table(table, n_max)?;
    phase.check_range(n_max.max(1))?;
    let mut entries = Vec::with_capacity(table.rho_sum(n_max) as usize);
    for n in 1..=n_max {
        let roots = table.roots(n);
        if roots.is_empty() {
            continue;
        }
        let h = phase.frac_at(n as i128);
        entries.extend(roots.iter().map(|&v| JointPoint { v: v as u64, n, h }));
    }
    Ok(JointSequence { entries })
}

/// Σ_{n<=N} e(h₁F(n)) Σ_{p(v)≡0 (n)} e(h₂v/n).
pub fn joint_weyl_sum(
    table: &RootTable,
    phase: &PolyPhase,
    n_max: u64,
    h1: i64,
    h2: i64,
) -> Result<Complex64> {
    check_table(table, n_max)?;
    phase.check_range(n_max.max(1))?;
    Ok(block_sum(1..n_max as usize + 1, |n| {
        let roots = table.roots(n as u64);
        if roots.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let inner: Complex64 = if h2 == 0 {
            Complex64::new(roots.len() as f64, 0.0)
        } else {
            let nn = n as i128;
            roots
                .iter()
                .map(|&v| unit_root((h2 as i128 * v as i128).rem_euclid(nn), n as u128))
                .sum()
        };
        if h1 == 0 {
            inner
        } else {
            phase.frac_at(n as i128).mul_int(h1 as i128).exp() * inner
        }
    }))
}

/// (1/x) Σ_{n<=x} |Σ_v e(hv/n)|.
pub fn hooley_average(table: &RootTable, h: i64, x: u64) -> Result<f64> {
    if h == 0 {
        return Err(Error::parameter(
            "h = 0 gives the mean of ρ; use the ρ statistics instead",
        ));
    }
    if x == 0 {
        return Err(Error::parameter("x must be >= 1"));
    }
    check_table(table, x)?;
    let total = block_sum(1..x as usize + 1, |n| {
        let nn = n as i128;
        table
            .roots(n as u64)
            .iter()
            .map(|&v| unit_root((h as i128 * v as i128).rem_euclid(nn), n as u128))
            .sum::<Complex64>()
            .norm()
    });
    Ok(total / x as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub grid_m: u64,
    pub points: u64,
    /// max over corners (i/m, j/m) of |count/total - ij/m²|.
    pub grid_value: f64,
    /// 2/m, the gap between the grid value and the star discrepancy.
    pub slack: f64,
}

impl Discrepancy {
    /// Upper bound for the star discrepancy.
    pub fn upper_bound(&self) -> f64 {
        self.grid_value + self.slack
    }
}

/// Anchored-box discrepancy on the corner grid {(i/m, j/m)}.
pub fn star_discrepancy_2d(seq: &JointSequence, grid_m: u64) -> Result<Discrepancy> {
    if !(2..=1 << 12).contains(&grid_m) {
        return Err(Error::parameter("grid size must lie in [2, 4096]"));
    }
    if seq.is_empty() {
        return Err(Error::parameter("discrepancy needs at least one point"));
    }
    let m = grid_m as usize;
    let mut cells = vec![0u64; m * m];
    for p in &seq.entries {
        let gi = ((p.v as u128 * grid_m as u128) / p.n as u128) as usize;
        let hj = p.h.scaled_floor(grid_m) as usize;
        cells[gi * m + hj] += 1;
    }
    // prefix[i][j] = #{gi < i, hj < j}
    let w = m + 1;
    let mut prefix = vec![0u64; w * w];
    for i in 1..=m {
        for j in 1..=m {
            prefix[i * w + j] =
                cells[(i - 1) * m + j - 1] + prefix[(i - 1) * w + j] + prefix[i * w + j - 1]
                    - prefix[(i - 1) * w + j - 1];
        }
    }
    let total = seq.len() as f64;
    let mut worst = 0.0f64;
    for i in 0..=m {
        for j in 0..=m {
            let emp = prefix[i * w + j] as f64 / total;
            let area = (i * j) as f64 / (m * m) as f64;
            worst = worst.max((emp - area).abs());
        }
    }
    Ok(Discrepancy {
        grid_m,
        points: seq.len() as u64,
        grid_value: worst,
        slack: 2.0 / grid_m as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeSieve;
    use crate::congruence::{build_root_table, IntPoly};

    fn table(n: u64) -> RootTable {
        let p = IntPoly::parse("x^2+1").unwrap();
        let s = PrimeSieve::new(n.max(2)).unwrap();
        build_root_table(&p, &s, n, false).unwrap()
    }

    #[test]
    fn sequence_example() {
        let t = table(5);
        let seq = joint_sequence(&t, &PolyPhase::parse("x/2").unwrap(), 5).unwrap();
        let got: Vec<(u64, u64, f64)> = seq
            .entries
            .iter()
            .map(|p| (p.v, p.n, p.h.to_f64()))
            .collect();
        assert_eq!(
            got,
            vec![(0, 1, 0.5), (1, 2, 0.0), (2, 5, 0.5), (3, 5, 0.5)]
        );
        assert_eq!(seq.len() as u64, t.rho_sum(5));
    }

    #[test]
    fn weyl_sum_identities() {
        let t = table(2000);
        let f = PolyPhase::parse("sqrt:2*x").unwrap();
        let w00 = joint_weyl_sum(&t, &f, 2000, 0, 0).unwrap();
        assert_eq!(w00, Complex64::new(t.rho_sum(2000) as f64, 0.0));
        for (h1, h2) in [(1, 0), (0, 1), (2, 3), (-1, 5)] {
            let a = joint_weyl_sum(&t, &f, 2000, h1, h2).unwrap();
            let b = joint_weyl_sum(&t, &f, 2000, -h1, -h2).unwrap();
            assert!((a - b.conj()).norm() < 1e-12);
            assert!(a.norm() <= w00.re + 1e-9);
        }
        let direct: Complex64 = (1..=2000u64)
            .map(|n| t.rho(n) as f64 * f.exp_at(n as i128))
            .sum();
        assert!((joint_weyl_sum(&t, &f, 2000, 1, 0).unwrap() - direct).norm() < 1e-9);
    }

    #[test]
    fn hooley_examples() {
        let t = table(1000);
        assert_eq!(hooley_average(&t, 1, 1).unwrap(), 1.0);
        assert!(hooley_average(&t, 0, 10).is_err());
        let a = hooley_average(&t, 3, 1000).unwrap();
        let b = hooley_average(&t, -3, 1000).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn discrepancy_examples() {
        let single = JointSequence {
            entries: vec![JointPoint {
                v: 0,
                n: 1,
                h: FracFixed::ZERO,
            }],
        };
        let d = star_discrepancy_2d(&single, 16).unwrap();
        assert!((d.grid_value - (1.0 - 1.0 / 256.0)).abs() < 1e-12);
        let m = 16u64;
        let mut entries = Vec::new();
        for i in 0..m {
            for j in 0..m {
                entries.push(JointPoint {
                    v: 2 * i + 1,
                    n: 2 * m,
                    h: FracFixed::from_ratio((2 * j + 1) as i128, 2 * m as u128),
                });
            }
        }
        let d = star_discrepancy_2d(&JointSequence { entries }, m).unwrap();
        assert!(d.grid_value <= 2.0 / m as f64);
        assert!(d.grid_value < 1e-12);
    }
}
