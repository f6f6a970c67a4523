//! Polynomial phases F(x) = α_d x^d + … + α_1 x evaluated exactly modulo 1.
//!
//! Coefficients are carried as 128-bit fixed-point fractional parts
//! ([`FracFixed`]). Multiplying a fixed-point value by an integer modulo 1
//! is a wrapping `u128` multiplication, so `{α_j n^j}` is exact for the
//! stored α_j; the only error is the 2^-128 truncation of α_j itself.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340282366920938463463374607431768211456.0;

/// Largest argument accepted by [`PolyPhase::frac_eval`].
pub const MAX_ARGUMENT: u64 = 1 << 40;

/// A point of ℝ/ℤ stored as `raw / 2^128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FracFixed(pub u128);

impl FracFixed {
    pub const ZERO: FracFixed = FracFixed(0);
    pub const HALF: FracFixed = FracFixed(1 << 127);

    pub fn raw(self) -> u128 {
        self.0
    }

    /// Fractional part of an `f64` (exact: every finite double has a
    /// terminating binary expansion).
    pub fn from_f64(x: f64) -> Self {
        let fr = x - x.floor();
        FracFixed((fr * TWO_POW_128) as u128)
    }

    /// `{num / den}` rounded down to the fixed-point grid.
    pub fn from_ratio(num: i128, den: u128) -> Self {
        assert!(den > 0, "zero denominator");
        let r = if den <= i128::MAX as u128 {
            num.rem_euclid(den as i128) as u128
        } else if num >= 0 {
            num as u128
        } else {
            den - num.unsigned_abs()
        };
        let scaled = (BigUint::from(r) << 128u32) / BigUint::from(den);
        FracFixed(scaled.to_u128().expect("fraction below one"))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO_POW_128
    }

    /// Representative in [-1/2, 1/2).
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// `{k · self}` for any integer `k`.
    pub fn mul_int(self, k: i128) -> Self {
        FracFixed(self.0.wrapping_mul(k as u128))
    }

    /// e(self) = exp(2πi · self).
    pub fn exp(self) -> Complex64 {
        if self.0 == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let theta = std::f64::consts::TAU * self.to_signed_f64();
        Complex64::new(theta.cos(), theta.sin())
    }

    /// `floor(self · m)` computed exactly, for `m <= 2^32`.
    pub fn scaled_floor(self, m: u64) -> u64 {
        let hi = (self.0 >> 64) * m as u128;
        let lo = (self.0 & u64::MAX as u128) * m as u128;
        ((hi + (lo >> 64)) >> 64) as u64
    }
}

impl Add for FracFixed {
    type Output = FracFixed;
    fn add(self, rhs: Self) -> Self {
        FracFixed(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for FracFixed {
    type Output = FracFixed;
    fn sub(self, rhs: Self) -> Self {
        FracFixed(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for FracFixed {
    type Output = FracFixed;
    fn neg(self) -> Self {
        FracFixed(self.0.wrapping_neg())
    }
}

impl fmt::Display for FracFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17}", self.to_f64())
    }
}

/// F(x) = α_1 x + … + α_d x^d with fractional coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyPhase {
    coeffs: Vec<FracFixed>,
}

impl PolyPhase {
    /// `coeffs[j - 1]` is α_j.
    pub fn new(coeffs: Vec<FracFixed>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::parameter("phase must have degree >= 1"));
        }
        Ok(PolyPhase { coeffs })
    }

    /// The zero phase of degree one.
    pub fn zero() -> Self {
        PolyPhase {
            coeffs: vec![FracFixed::ZERO],
        }
    }

    /// Linear phase αx.
    pub fn linear(alpha: FracFixed) -> Self {
        PolyPhase {
            coeffs: vec![alpha],
        }
    }

    pub fn parse(expr: &str) -> Result<Self> {
        parse_phase(expr)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FracFixed] {
        &self.coeffs
    }

    /// α_ℓ for `1 <= ell <= d`.
    pub fn coeff(&self, ell: usize) -> FracFixed {
        self.coeffs[ell - 1]
    }

    /// Checks that every argument in `[1, n_max]` is inside the evaluation
    /// budget, so hot loops can call [`PolyPhase::frac_at`] unchecked.
    pub fn check_range(&self, n_max: u64) -> Result<()> {
        if n_max > MAX_ARGUMENT {
            return Err(Error::parameter(format!(
                "phase argument {n_max} exceeds 2^40"
            )));
        }
        let d = self.degree() as f64;
        if n_max > 1 && (d - 1.0) * (n_max as f64).log2() >= 100.0 {
            return Err(Error::parameter(format!(
                "n^(d-1) >= 2^100 for n = {n_max}, d = {}: fixed-point error budget exceeded",
                self.degree()
            )));
        }
        Ok(())
    }

    /// `{F(n)}` after validating `n`.
    pub fn frac_eval(&self, n: u64) -> Result<FracFixed> {
        if n == 0 {
            return Err(Error::parameter("phase argument must be >= 1"));
        }
        self.check_range(n)?;
        Ok(self.frac_at(n as i128))
    }

    /// `{F(n)}` with no range check; any integer argument is accepted and
    /// the result is exact for the stored coefficients.
    #[inline]
    pub fn frac_at(&self, n: i128) -> FracFixed {
        let step = n as u128;
        let mut power: u128 = 1;
        let mut acc: u128 = 0;
        for c in &self.coeffs {
            power = power.wrapping_mul(step);
            acc = acc.wrapping_add(c.0.wrapping_mul(power));
        }
        FracFixed(acc)
    }

    pub fn phase_exp(&self, n: u64) -> Result<Complex64> {
        Ok(self.frac_eval(n)?.exp())
    }

    #[inline]
    pub fn exp_at(&self, n: i128) -> Complex64 {
        self.frac_at(n).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.0 == 0)
    }
}

/// A certified Dirichlet approximation |α_ℓ - a/q| <= 1/(qR).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalApprox {
    pub ell: usize,
    pub a: u128,
    pub q: u128,
    #[serde(rename = "R")]
    pub r_bound: f64,
    pub err: f64,
    pub residual_beta: f64,
    /// α equals a/q to within the fixed-point resolution.
    pub exact: bool,
}

impl RationalApprox {
    /// Both certificate inequalities: `q <= R` and `err·q·R <= 1`.
    pub fn certified(&self) -> bool {
        (self.q as f64) <= self.r_bound && self.err * self.q as f64 * self.r_bound <= 1.0
    }
}

/// Last continued-fraction convergent of α with denominator at most `R`.
///
/// α is read as the exact rational `raw / 2^128`. When the convergent
/// reproduces α to within one unit of the fixed-point grid the
/// approximation is reported as exact with zero error.
pub fn dirichlet_approx(alpha: FracFixed, r_bound: f64) -> Result<RationalApprox> {
    if !r_bound.is_finite() || r_bound < 1.0 {
        return Err(Error::parameter(format!(
            "R = {r_bound} must be finite and >= 1"
        )));
    }
    // Convergents h/k: (h_{-1}, k_{-1}) = (1, 0), (h_0, k_0) = (a_0, 1) with a_0 = 0.
    let (mut h_prev, mut k_prev): (u128, u128) = (1, 0);
    let (mut h, mut k): (u128, u128) = (0, 1);
    let raw = alpha.0;
    if raw != 0 {
        // First partial quotient of 2^128 / raw, then Euclid on (raw, rem).
        let (first_q, first_r) = if raw == 1 {
            (None, 0)
        } else {
            let mut q = u128::MAX / raw;
            let mut r = u128::MAX % raw + 1;
            if r == raw {
                q += 1;
                r = 0;
            }
            (Some(q), r)
        };
        let mut num = raw;
        let mut den = first_r;
        let mut quotient = first_q;
        while let Some(aq) = quotient {
            let next_k = aq.checked_mul(k).and_then(|v| v.checked_add(k_prev));
            let next_h = aq.checked_mul(h).and_then(|v| v.checked_add(h_prev));
            match (next_h, next_k) {
                (Some(nh), Some(nk)) if (nk as f64) <= r_bound => {
                    (h_prev, k_prev, h, k) = (h, k, nh, nk);
                }
                _ => break,
            }
            if den == 0 {
                break;
            }
            quotient = Some(num / den);
            (num, den) = (den, num % den);
        }
    }
    // |qα - a| = |q·raw - a·2^128| / 2^128, computed exactly.
    let scaled = BigInt::from(k) * BigInt::from(raw) - (BigInt::from(h) << 128u32);
    let exact = scaled.abs() < BigInt::from(k);
    let (err, beta) = if exact {
        (0.0, 0.0)
    } else {
        let e = scaled.to_f64().unwrap_or(0.0) / TWO_POW_128 / k as f64;
        (e.abs(), e)
    };
    Ok(RationalApprox {
        ell: 1,
        a: h,
        q: k,
        r_bound,
        err,
        residual_beta: beta,
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcLabel {
    Major,
    Minor,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcClassification {
    pub approximations: Vec<RationalApprox>,
    /// (log N)^B.
    pub threshold: f64,
    pub label: ArcLabel,
}

/// Approximates every α_ℓ with `R = N^ℓ / (log N)^B` and labels the phase
/// "minor" when some denominator reaches `(log N)^B`.
pub fn classify_arc(phase: &PolyPhase, n: u64, b: f64) -> Result<ArcClassification> {
    if n < 16 {
        return Err(Error::parameter("classify_arc needs N >= 16"));
    }
    if b.is_nan() || b <= 0.0 {
        return Err(Error::parameter("classify_arc needs B > 0"));
    }
    let log_n = (n as f64).ln();
    let threshold = log_n.powf(b);
    let mut approximations = Vec::with_capacity(phase.degree());
    for ell in 1..=phase.degree() {
        let r = ((n as f64).powi(ell as i32) / threshold).max(1.0);
        let mut approx = dirichlet_approx(phase.coeff(ell), r)?;
        approx.ell = ell;
        approximations.push(approx);
    }
    let label = if approximations.iter().any(|a| a.q as f64 >= threshold) {
        ArcLabel::Minor
    } else {
        ArcLabel::Major
    };
    Ok(ArcClassification {
        approximations,
        threshold,
        label,
    })
}

// ---------------------------------------------------------------------------
// Parsing of real constants and phase expressions.

const PI_LITERAL: &str = "3.1415926535897932384626433832795028841971";
const GOLDEN_LITERAL: &str = "1.6180339887498948482045868343656381177203";

/// A real number as `value · 2^128`, rounded toward -∞.
#[derive(Debug, Clone, PartialEq)]
struct Scaled(BigInt);

impl Scaled {
    fn from_integer(v: BigInt) -> Self {
        Scaled(v << 128u32)
    }

    fn mul(&self, other: &Scaled) -> Scaled {
        Scaled((&self.0 * &other.0).div_floor(&(BigInt::one() << 128u32)))
    }

    fn div(&self, other: &Scaled) -> Result<Scaled> {
        if other.0.is_zero() {
            return Err(Error::parameter("division by zero in expression"));
        }
        Ok(Scaled((&self.0 << 128u32).div_floor(&other.0)))
    }

    fn frac(&self) -> FracFixed {
        let modulus = BigInt::one() << 128u32;
        let r = self.0.mod_floor(&modulus);
        FracFixed(r.to_u128().expect("reduced below 2^128"))
    }
}

fn parse_decimal(text: &str) -> Result<Scaled> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::parameter(format!(
            "malformed decimal literal '{text}'"
        )));
    }
    let digits = format!("{int_part}{frac_part}");
    let value = BigInt::parse_bytes(digits.as_bytes(), 10)
        .ok_or_else(|| Error::parameter(format!("malformed decimal literal '{text}'")))?;
    let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Ok(Scaled((value << 128u32).div_floor(&scale)))
}

fn sqrt_scaled(n: u64) -> Scaled {
    // floor(sqrt(n) · 2^128) = isqrt(n · 2^256).
    let root = (BigUint::from(n) << 256u32).sqrt();
    Scaled(BigInt::from_biguint(Sign::Plus, root))
}

/// Parses a real constant token: a decimal literal, `a/b`, `sqrt:n`,
/// `golden` or `pi`, returning its fractional part.
pub fn parse_real(token: &str) -> Result<FracFixed> {
    let phase = parse_phase(&format!("({token})*x"))?;
    if phase.degree() != 1 {
        return Err(Error::parameter(format!("'{token}' is not a constant")));
    }
    Ok(phase.coeff(1))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Sqrt(u64),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(expr: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = expr.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push(Token::Number(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "sqrt" && i < chars.len() && chars[i] == ':' {
                    i += 1;
                    let ds = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[ds..i].iter().collect();
                    let n = digits
                        .parse::<u64>()
                        .map_err(|_| Error::parameter("sqrt: expects a non-negative integer"))?;
                    out.push(Token::Sqrt(n));
                } else if word == "x" {
                    out.push(Token::X);
                } else {
                    out.push(Token::Ident(word));
                }
            }
            other => {
                return Err(Error::parameter(format!(
                    "unexpected character '{other}' in expression"
                )))
            }
        }
    }
    Ok(out)
}

/// Polynomial with real (scaled) coefficients indexed by degree.
type ScaledPoly = Vec<Scaled>;

fn poly_add(a: &ScaledPoly, b: &ScaledPoly, sign: i32) -> ScaledPoly {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).map(|s| s.0.clone()).unwrap_or_default();
            let y = b.get(i).map(|s| s.0.clone()).unwrap_or_default();
            Scaled(if sign > 0 { x + y } else { x - y })
        })
        .collect()
}

fn poly_mul(a: &ScaledPoly, b: &ScaledPoly) -> ScaledPoly {
    let mut out = vec![Scaled(BigInt::zero()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = Scaled(&out[i + j].0 + x.mul(y).0);
        }
    }
    out
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ScaledPoly> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                let t = self.term()?;
                poly_add(&vec![], &t, -1)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => 1,
                Token::Minus => -1,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = poly_add(&acc, &rhs, sign);
        }
        Ok(acc)
    }

    fn starts_factor(t: &Token) -> bool {
        matches!(
            t,
            Token::Number(_) | Token::Ident(_) | Token::Sqrt(_) | Token::X | Token::LParen
        )
    }

    fn term(&mut self) -> Result<ScaledPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = poly_mul(&acc, &rhs);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    if rhs.len() != 1 {
                        return Err(Error::parameter("cannot divide by a polynomial in x"));
                    }
                    acc = acc
                        .iter()
                        .map(|c| c.div(&rhs[0]))
                        .collect::<Result<Vec<_>>>()?;
                }
                Some(t) if Self::starts_factor(t) => {
                    let rhs = self.power()?;
                    acc = poly_mul(&acc, &rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ScaledPoly> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let exp = match self.next() {
                Some(Token::Number(s)) => s
                    .parse::<u32>()
                    .map_err(|_| Error::parameter(format!("bad exponent '{s}'")))?,
                _ => return Err(Error::parameter("expected integer exponent after '^'")),
            };
            let mut acc = vec![Scaled::from_integer(BigInt::one())];
            for _ in 0..exp {
                acc = poly_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ScaledPoly> {
        match self.next() {
            Some(Token::Number(s)) => Ok(vec![parse_decimal(&s)?]),
            Some(Token::Sqrt(n)) => Ok(vec![sqrt_scaled(n)]),
            Some(Token::Ident(w)) => match w.as_str() {
                "pi" => Ok(vec![parse_decimal(PI_LITERAL)?]),
                "golden" | "phi" => Ok(vec![parse_decimal(GOLDEN_LITERAL)?]),
                other => Err(Error::parameter(format!("unknown constant '{other}'"))),
            },
            Some(Token::X) => Ok(vec![
                Scaled(BigInt::zero()),
                Scaled::from_integer(BigInt::one()),
            ]),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::parameter("missing ')'")),
                }
            }
            Some(Token::Minus) => {
                let inner = self.power()?;
                Ok(poly_add(&vec![], &inner, -1))
            }
            other => Err(Error::parameter(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses expressions such as `"sqrt:2*x^2 + golden*x"` or `"x/2"`.
///
/// Constant terms are rejected: phases have no constant coefficient.
pub fn parse_phase(expr: &str) -> Result<PolyPhase> {
    let tokens = tokenize(expr)?;
    if tokens.is_empty() {
        return Err(Error::parameter("empty phase expression"));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::parameter(format!(
            "trailing input in phase expression '{expr}'"
        )));
    }
    if poly.first().is_some_and(|c| !c.0.is_zero()) {
        return Err(Error::parameter(format!(
            "phase '{expr}' has a nonzero constant term"
        )));
    }
    let mut coeffs: Vec<FracFixed> = poly.iter().skip(1).map(Scaled::frac).collect();
    while coeffs.len() > 1 && coeffs.last() == Some(&FracFixed::ZERO) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(FracFixed::ZERO);
    }
    PolyPhase::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(expr: &str) -> f64 {
        parse_real(expr).unwrap().to_f64()
    }

    #[test]
    fn frac_eval_examples() {
        let f = PolyPhase::parse("x/2").unwrap();
        assert_eq!(f.frac_eval(3).unwrap(), FracFixed::HALF);
        let f = PolyPhase::parse("x^2/4").unwrap();
        assert_eq!(f.frac_eval(2).unwrap(), FracFixed::ZERO);
        let f = PolyPhase::parse("(sqrt:2 - 1)*x").unwrap();
        let v = f.frac_eval(2).unwrap().to_f64();
        assert!((v - 0.828_427_124_746_190_1).abs() < 1e-15);
    }

    #[test]
    fn phase_exp_examples() {
        let f = PolyPhase::parse("x/2").unwrap();
        assert!((f.phase_exp(1).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let f = PolyPhase::parse("x/4").unwrap();
        assert!((f.phase_exp(1).unwrap() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let f = PolyPhase::parse("x/3").unwrap();
        assert!((f.phase_exp(3).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_guards() {
        let f = PolyPhase::parse("x/2").unwrap();
        assert!(f.frac_eval(0).is_err());
        assert!(f.frac_eval(MAX_ARGUMENT + 1).is_err());
        let f = PolyPhase::parse("sqrt:2*x^4").unwrap();
        // n^(d-1) = 2^120 > 2^100
        assert!(f.frac_eval(1 << 40).is_err());
        assert!(f.frac_eval(1 << 20).is_ok());
    }

    #[test]
    fn constants_parse_deterministically() {
        assert!((frac("sqrt:2") - (2f64.sqrt() - 1.0)).abs() < 3e-16);
        assert!((frac("golden") - 0.618_033_988_749_894_9).abs() < 1e-16);
        assert!((frac("pi") - (std::f64::consts::PI - 3.0)).abs() < 1e-15);
        assert!((frac("-0.25") - 0.75).abs() < 1e-18);
        assert_eq!(parse_real("1/3").unwrap(), FracFixed::from_ratio(1, 3));
        assert!(PolyPhase::parse("x + 1").is_err());
        assert!(PolyPhase::parse("foo*x").is_err());
        assert!(PolyPhase::parse("").is_err());
    }

    #[test]
    fn parse_mixed_expression() {
        let f = PolyPhase::parse("sqrt:2*x^2 + golden*x").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coeff(2), parse_real("sqrt:2").unwrap());
        assert_eq!(f.coeff(1), parse_real("golden").unwrap());
        let g = PolyPhase::parse("2x - x/2").unwrap();
        assert_eq!(g.coeff(1), FracFixed::HALF);
        // integer part matters under a rational multiplier: {sqrt(2)/2}
        let h = PolyPhase::parse("sqrt:2/2*x").unwrap();
        assert!((h.coeff(1).to_f64() - 2f64.sqrt() / 2.0).abs() < 1e-16);
    }

    #[test]
    fn dirichlet_examples() {
        let third = dirichlet_approx(FracFixed::from_ratio(1, 3), 10.0).unwrap();
        assert_eq!((third.a, third.q), (1, 3));
        assert_eq!(third.err, 0.0);
        assert!(third.exact);

        let pi = dirichlet_approx(parse_real("pi").unwrap(), 100.0).unwrap();
        assert_eq!((pi.a, pi.q), (1, 7));
        assert!((pi.err - 1.264_489_3e-3).abs() < 1e-9);
        assert!(pi.err <= 1.0 / 700.0);

        let g = dirichlet_approx(parse_real("golden").unwrap(), 13.0).unwrap();
        assert_eq!((g.a, g.q), (8, 13));
        assert!((g.err - 2.652e-3).abs() < 1e-5);
        assert!(g.err <= 1.0 / 169.0);
    }

    #[test]
    fn dirichlet_rejects_small_r() {
        assert!(dirichlet_approx(FracFixed::HALF, 0.5).is_err());
        assert!(dirichlet_approx(FracFixed::HALF, f64::NAN).is_err());
        let z = dirichlet_approx(FracFixed::ZERO, 5.0).unwrap();
        assert_eq!((z.a, z.q, z.exact), (0, 1, true));
    }

    #[test]
    fn classify_examples() {
        let c = classify_arc(&PolyPhase::parse("x/2").unwrap(), 10_000, 1.0).unwrap();
        assert_eq!(c.approximations[0].q, 2);
        assert_eq!(c.label, ArcLabel::Major);

        // R = 10^4 / log(10^4) ≈ 1085.7; convergents of {sqrt 2}: …, 169/408, 408/985, 985/2378.
        let c = classify_arc(&PolyPhase::parse("sqrt:2*x").unwrap(), 10_000, 1.0).unwrap();
        assert_eq!((c.approximations[0].a, c.approximations[0].q), (408, 985));
        assert_eq!(c.label, ArcLabel::Minor);

        let c = classify_arc(&PolyPhase::parse("x^2/3 + x/4").unwrap(), 10_000, 1.0).unwrap();
        assert_eq!(c.approximations[0].q, 4);
        assert_eq!(c.approximations[1].q, 3);
        assert_eq!(c.label, ArcLabel::Major);
    }

    #[test]
    fn rational_phase_is_periodic() {
        let f = PolyPhase::parse("x^3/6 + 5*x^2/12 + x/4").unwrap();
        for n in 1..200i128 {
            // coefficients are truncated to 128 bits, so only approximately
            assert!((f.frac_at(n) - f.frac_at(n + 12)).to_signed_f64().abs() < 1e-30);
        }
    }

    fn big_reference(phase: &PolyPhase, n: u64) -> u128 {
        // Σ raw_j n^j mod 2^128 in arbitrary precision.
        let modulus = BigUint::one() << 128u32;
        let mut acc = BigUint::zero();
        for (j, c) in phase.coeffs().iter().enumerate() {
            acc += BigUint::from(c.0) * num_traits::pow(BigUint::from(n), j + 1);
        }
        (acc % modulus).to_u128().unwrap()
    }

    proptest::proptest! {
        #[test]
        fn frac_eval_matches_wide_reference(
            coeffs in proptest::collection::vec(proptest::num::u128::ANY, 1..=4),
            n in 1u64..=1_000_000,
        ) {
            let phase = PolyPhase::new(coeffs.into_iter().map(FracFixed).collect()).unwrap();
            let got = phase.frac_eval(n).unwrap();
            proptest::prop_assert_eq!(got.0, big_reference(&phase, n));
        }

        #[test]
        fn truncation_error_within_budget(n in 1u64..=1_000_000, d in 1usize..=4) {
            // True coefficient: the 40-digit literal of pi - 3, as an exact rational.
            let digits = BigInt::parse_bytes(b"1415926535897932384626433832795028841971", 10).unwrap();
            let scale = num_traits::pow(BigInt::from(10u32), 40);
            let mut coeffs = vec![FracFixed::ZERO; d];
            coeffs[d - 1] = parse_real("pi").unwrap();
            let phase = PolyPhase::new(coeffs).unwrap();
            let got = phase.frac_eval(n).unwrap();
            let exact_num = (&digits * num_traits::pow(BigInt::from(n), d)).mod_floor(&scale);
            // error = |got - exact| measured in units of 2^-128
            let got_scaled = BigInt::from(got.0) * &scale;
            let exact_scaled = exact_num << 128u32;
            let mut diff = (got_scaled - exact_scaled).abs();
            let wrap = &scale << 128u32;
            if diff > (&wrap >> 1u32) { diff = wrap - diff; }
            let budget = BigInt::from(2u32) * num_traits::pow(BigInt::from(n), d) * &scale;
            proptest::prop_assert!(diff <= budget);
        }

        #[test]
        fn dirichlet_certificate(raw in proptest::num::u128::ANY, r in 1.0f64..1e12) {
            let a = dirichlet_approx(FracFixed(raw), r).unwrap();
            proptest::prop_assert!((a.q as f64) <= r);
            proptest::prop_assert!(a.err * a.q as f64 * r <= 1.0);
            proptest::prop_assert_eq!(num_integer::gcd(a.a, a.q), 1);
        }
    }
}
