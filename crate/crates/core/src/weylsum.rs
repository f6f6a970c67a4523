//! Sum evaluators for Σ f(n) e(F(n)) and its bilinear relatives, plus the
//! bound-report harness comparing |S| against the terms of the main
//! estimate.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::PrimeSieve;
use crate::error::{Error, Result};
use crate::numeric::{block_sum, pairwise};
use crate::partition::{PartitionScheme, Rectangle};
use crate::phase::{dirichlet_approx, PolyPhase, RationalApprox};

fn check_values(values: &[Complex64], n_max: u64) -> Result<()> {
    if (values.len() as u64) <= n_max {
        return Err(Error::parameter(format!(
            "coefficient array covers 1..{} but N = {n_max}",
            values.len().saturating_sub(1)
        )));
    }
    Ok(())
}

/// Σ_{n<=N} f(n) e(F(n)), with `values[n] = f(n)`.
pub fn weyl_sum(values: &[Complex64], phase: &PolyPhase, n_max: u64) -> Result<Complex64> {
    check_values(values, n_max)?;
    phase.check_range(n_max)?;
    let s = block_sum(1..n_max as usize + 1, |n| {
        values[n] * phase.exp_at(n as i128)
    });
    debug_assert!(
        s.norm()
            <= values[1..=n_max as usize]
                .iter()
                .map(|v| v.norm())
                .sum::<f64>()
                + 1e-6
    );
    Ok(s)
}

/// Σ_{n<=N} f(n) log(N/n) e(F(n)).
pub fn log_weighted_sum(values: &[Complex64], phase: &PolyPhase, n_max: u64) -> Result<Complex64> {
    check_values(values, n_max)?;
    phase.check_range(n_max)?;
    let log_n = (n_max as f64).ln();
    Ok(block_sum(1..n_max as usize + 1, |n| {
        values[n] * (log_n - (n as f64).ln()) * phase.exp_at(n as i128)
    }))
}

/// Σ_{p prime, n >= 1, pn <= N} f(n) f(p) (log p) e(F(np)).
pub fn hyperbola_bilinear(
    values: &[Complex64],
    sieve: &PrimeSieve,
    phase: &PolyPhase,
    n_max: u64,
) -> Result<Complex64> {
    check_values(values, n_max)?;
    sieve.check_covers(n_max)?;
    phase.check_range(n_max)?;
    if n_max < 2 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let primes = sieve.primes_between(2, n_max);
    Ok(block_sum(0..primes.len(), |i| {
        let p = primes[i] as u64;
        let weight = values[p as usize] * (p as f64).ln();
        let mut inner = Complex64::new(0.0, 0.0);
        for n in 1..=n_max / p {
            inner += values[n as usize] * phase.exp_at((n * p) as i128);
        }
        weight * inner
    }))
}

/// A family of rectangles (p, n) ∈ (P', P''] × (M', M''] over which the
/// bilinear form I is summed.
#[derive(Debug, Clone)]
pub struct RectFamily {
    rects: Vec<Rectangle>,
    /// Bound Q on the p-sides.
    pub q_bound: f64,
    /// Maximal p-width X.
    pub x_width: f64,
    /// Bound M on the n-sides.
    pub m_bound: f64,
    /// Maximal n-width Y.
    pub y_width: f64,
}

impl RectFamily {
    /// Validates the side conditions: p-sides inside (0, Q] with width
    /// <= X, n-sides inside (0, M] with width <= Y and M'' <= 2M', and at
    /// most M rectangles.
    pub fn new(
        rects: Vec<Rectangle>,
        q_bound: f64,
        x_width: f64,
        m_bound: f64,
        y_width: f64,
    ) -> Result<Self> {
        if rects.len() as f64 > m_bound.max(0.0) && !rects.is_empty() {
            return Err(Error::parameter(format!(
                "family has {} rectangles, more than M = {m_bound}",
                rects.len()
            )));
        }
        for (idx, r) in rects.iter().enumerate() {
            let bad = |what: &str| Err(Error::parameter(format!("rectangle {idx}: {what}")));
            if r.p_lo_f64() < 0.0 || r.p_hi_f64() > q_bound {
                return bad("p-side not inside (0, Q]");
            }
            if r.p_width() > x_width {
                return bad("p-width exceeds X");
            }
            if r.n_lo_f64() < 0.0 || r.n_hi_f64() > m_bound {
                return bad("n-side not inside (0, M]");
            }
            if r.n_width() > y_width {
                return bad("n-width exceeds Y");
            }
            if r.n_hi > r.n_lo * 2u128 {
                return bad("n-side is not dyadic (M'' > 2M')");
            }
        }
        Ok(RectFamily {
            rects,
            q_bound,
            x_width,
            m_bound,
            y_width,
        })
    }

    /// The tightest family parameters for a given rectangle list.
    pub fn fitted(rects: Vec<Rectangle>) -> Result<Self> {
        let q = rects.iter().map(|r| r.p_hi_f64()).fold(0.0, f64::max);
        let x = rects.iter().map(|r| r.p_width()).fold(0.0, f64::max);
        let m = rects.iter().map(|r| r.n_hi_f64()).fold(0.0, f64::max);
        let y = rects.iter().map(|r| r.n_width()).fold(0.0, f64::max);
        Self::new(rects, q, x, m, y)
    }

    /// Sub-rectangles R_{i,j,k} of a partition scheme.
    pub fn from_partition_sub(scheme: &PartitionScheme) -> Result<Self> {
        Self::fitted(scheme.sub_rects.iter().map(|s| s.rect.clone()).collect())
    }

    /// Main rectangles R_i of a partition scheme.
    pub fn from_partition_main(scheme: &PartitionScheme) -> Result<Self> {
        Self::fitted(scheme.main_rects.iter().map(|(_, r)| r.clone()).collect())
    }

    pub fn rects(&self) -> &[Rectangle] {
        &self.rects
    }
}

/// I = Σ_k Σ_{(p,n) ∈ R(k), p prime} α(n) β(p) e(F(np)).
///
/// `alpha[n]` and `beta[p]` must cover every side of the family and every
/// β(p) used must satisfy |β(p)| <= 1.
pub fn rect_bilinear(
    alpha: &[Complex64],
    beta: &[Complex64],
    sieve: &PrimeSieve,
    phase: &PolyPhase,
    family: &RectFamily,
) -> Result<Complex64> {
    let mut partials = Vec::with_capacity(family.rects.len());
    for (idx, rect) in family.rects.iter().enumerate() {
        let (p_lo, p_hi) = rect.p_lattice();
        let (n_lo, n_hi) = rect.n_lattice();
        if p_lo > p_hi || n_lo > n_hi {
            partials.push(Complex64::new(0.0, 0.0));
            continue;
        }
        if n_hi as usize >= alpha.len() || p_hi as usize >= beta.len() {
            return Err(Error::parameter(format!(
                "rectangle {idx} exceeds the supplied coefficient arrays"
            )));
        }
        sieve.check_covers(p_hi)?;
        phase.check_range(p_hi.saturating_mul(n_hi).max(1))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for &p in sieve.primes_between(p_lo, p_hi) {
            let b = beta[p as usize];
            if b.norm() > 1.0 + 1e-12 {
                return Err(Error::parameter(format!("|beta({p})| = {} > 1", b.norm())));
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for n in n_lo..=n_hi {
                inner += alpha[n as usize] * phase.exp_at((n * p as u64) as i128);
            }
            acc += b * inner;
        }
        partials.push(acc);
    }
    Ok(pairwise(&partials))
}

/// |S| set against the three terms of the main estimate.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub r: u32,
    #[serde(rename = "A")]
    pub a: f64,
    pub sum_re: f64,
    pub sum_im: f64,
    pub lhs: f64,
    /// N / (log N)^{1-C}.
    pub rhs_main: f64,
    /// N (log N)^C (q/N^ℓ + 1/q)^{1/(4r²)}.
    pub rhs_arc: f64,
    /// (N R^{1/ℓ})^{1/2}.
    pub rhs_tail: f64,
    pub ratio: f64,
    pub approx: RationalApprox,
    /// (log N)^{4r²} <= q <= N^ℓ / (log N)^{4r²}.
    pub in_saving_window: bool,
}

impl BoundReport {
    /// C = A / (2r).
    pub fn c(&self) -> f64 {
        self.a / (2.0 * self.r as f64)
    }
}

/// Evaluates S = Σ f(n)e(F(n)) and the bound terms for every ℓ, keeping the
/// ℓ with the smallest right-hand side. With no caller `R`, each α_ℓ is
/// approximated with R = N^{ℓ/2}.
pub fn bound_report(
    values: &[Complex64],
    phase: &PolyPhase,
    n_max: u64,
    r: u32,
    a: f64,
    r_bound: Option<f64>,
) -> Result<BoundReport> {
    let d = phase.degree() as u32;
    if r <= d * (d + 1) {
        return Err(Error::parameter(format!(
            "need r > d(d+1) = {}, got r = {r}",
            d * (d + 1)
        )));
    }
    if n_max < 3 {
        return Err(Error::parameter("bound report needs N >= 3"));
    }
    if a.is_nan() || a < 0.0 {
        return Err(Error::parameter("A must be >= 0"));
    }
    let sum = weyl_sum(values, phase, n_max)?;
    let nf = n_max as f64;
    let log_n = nf.ln();
    let c = a / (2.0 * r as f64);
    let rhs_main = nf / log_n.powf(1.0 - c);
    let hoelder = 4.0 * (r as f64).powi(2);
    let mut best: Option<(f64, f64, f64, RationalApprox)> = None;
    for ell in 1..=d as usize {
        let n_ell = nf.powi(ell as i32);
        let rb = r_bound.unwrap_or_else(|| n_ell.sqrt()).max(1.0);
        let mut approx = dirichlet_approx(phase.coeff(ell), rb)?;
        approx.ell = ell;
        let q = approx.q as f64;
        let arc = nf * log_n.powf(c) * (q / n_ell + 1.0 / q).powf(1.0 / hoelder);
        let tail = (nf * rb.powf(1.0 / ell as f64)).sqrt();
        if best.as_ref().is_none_or(|b| arc + tail < b.0 + b.1) {
            best = Some((arc, tail, rb, approx));
        }
    }
    let (rhs_arc, rhs_tail, _, approx) = best.expect("degree >= 1");
    let q = approx.q as f64;
    let window = log_n.powf(hoelder);
    let in_saving_window = window <= q && q <= nf.powi(approx.ell as i32) / window;
    let lhs = sum.norm();
    Ok(BoundReport {
        n: n_max,
        r,
        a,
        sum_re: sum.re,
        sum_im: sum.im,
        lhs,
        rhs_main,
        rhs_arc,
        rhs_tail,
        ratio: lhs / (rhs_main + rhs_arc + rhs_tail),
        approx,
        in_saving_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfunc::MultiplicativeFunction;

    fn ones(n: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(1.0, 0.0); n + 1];
        v[0] = Complex64::new(0.0, 0.0);
        v
    }

    #[test]
    fn weyl_sum_examples() {
        let v = ones(1000);
        let s = weyl_sum(&v, &PolyPhase::zero(), 1000).unwrap();
        assert_eq!(s, Complex64::new(1000.0, 0.0));
        let s = weyl_sum(&v, &PolyPhase::parse("x/2").unwrap(), 1000).unwrap();
        assert!(s.norm() < 1e-12);
        assert!(weyl_sum(&v, &PolyPhase::zero(), 1001).is_err());
    }

    #[test]
    fn weyl_sum_geometric_closed_form() {
        let n = 100_000u64;
        let v = ones(n as usize);
        let alpha = crate::phase::parse_real("0.3712").unwrap();
        let s = weyl_sum(&v, &PolyPhase::linear(alpha), n).unwrap();
        // Σ_{n=1}^N e(αn) = e(α(N+1)/2) sin(πNα)/sin(πα)
        let a = alpha.to_f64();
        let pi = std::f64::consts::PI;
        let closed = Complex64::from_polar(1.0, pi * a * (n as f64 + 1.0))
            * ((pi * n as f64 * a).sin() / (pi * a).sin());
        assert!((s - closed).norm() < 1e-9);
    }

    #[test]
    fn log_weighted_examples() {
        let v = ones(10_000);
        assert_eq!(
            log_weighted_sum(&v, &PolyPhase::zero(), 1).unwrap().norm(),
            0.0
        );
        // Σ log(N/n) = N log N - log N!, log N! via Stirling series.
        let n = 10_000f64;
        let ln_fact = n * n.ln() - n + 0.5 * (std::f64::consts::TAU * n).ln() + 1.0 / (12.0 * n)
            - 1.0 / (360.0 * n.powi(3));
        let expect = n * n.ln() - ln_fact;
        let got = log_weighted_sum(&v, &PolyPhase::zero(), 10_000).unwrap().re;
        assert!((got - expect).abs() / expect < 1e-6);
    }

    #[test]
    fn log_weighted_identity() {
        let s = PrimeSieve::new(5000).unwrap();
        let v = MultiplicativeFunction::mobius()
            .sieve_values(&s, 5000)
            .unwrap();
        let f = PolyPhase::parse("sqrt:3*x^2 + x/7").unwrap();
        let lhs = (5000f64).ln() * weyl_sum(&v, &f, 5000).unwrap()
            - log_weighted_sum(&v, &f, 5000).unwrap();
        let rhs: Complex64 = (1..=5000u64)
            .map(|n| v[n as usize] * (n as f64).ln() * f.exp_at(n as i128))
            .sum();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn hyperbola_small_case() {
        let s = PrimeSieve::new(100).unwrap();
        let v = ones(10);
        assert_eq!(
            hyperbola_bilinear(&v, &s, &PolyPhase::zero(), 1)
                .unwrap()
                .norm(),
            0.0
        );
        let got = hyperbola_bilinear(&v, &s, &PolyPhase::zero(), 10).unwrap();
        let expect = 5.0 * 2f64.ln() + 3.0 * 3f64.ln() + 2.0 * 5f64.ln() + 7f64.ln();
        assert!((got.re - expect).abs() < 1e-12);
    }

    #[test]
    fn rect_bilinear_examples() {
        let s = PrimeSieve::new(100).unwrap();
        let v = ones(20);
        let empty = RectFamily::fitted(vec![]).unwrap();
        assert_eq!(
            rect_bilinear(&v, &v, &s, &PolyPhase::zero(), &empty)
                .unwrap()
                .norm(),
            0.0
        );
        let r = Rectangle::new(0, 1, 10, 1, 5, 1, 10, 1);
        let fam = RectFamily::fitted(vec![r]).unwrap();
        let got = rect_bilinear(&v, &v, &s, &PolyPhase::zero(), &fam).unwrap();
        // primes 2,3,5,7 times n in (5,10]
        assert_eq!(got.re, 20.0);
        let mut big = v.clone();
        big[3] = Complex64::new(1.5, 0.0);
        assert!(rect_bilinear(&v, &big, &s, &PolyPhase::zero(), &fam).is_err());
    }

    #[test]
    fn family_validation() {
        let r = Rectangle::new(0, 1, 10, 1, 1, 1, 10, 1);
        assert!(RectFamily::fitted(vec![r]).is_err());
    }

    #[test]
    fn report_guards_and_main_term() {
        let s = PrimeSieve::new(2000).unwrap();
        let v = MultiplicativeFunction::mobius()
            .sieve_values(&s, 2000)
            .unwrap();
        let f2 = PolyPhase::parse("sqrt:2*x^2").unwrap();
        assert!(bound_report(&v, &f2, 2000, 6, 0.0, None).is_err());
        let rep = bound_report(&v, &f2, 2000, 7, 0.0, None).unwrap();
        assert!((rep.rhs_main - 2000.0 / 2000f64.ln()).abs() < 1e-9);
        assert_eq!(rep.c(), 0.0);
        assert!(rep.ratio.is_finite() && rep.ratio >= 0.0);
    }
}
