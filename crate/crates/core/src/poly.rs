//! Exact scalars and dense univariate polynomials over the rationals.
//!
//! Besides the usual ring operations this module hosts the derived-polynomial
//! operators used by the cascade method: the formal derivative, the
//! content-reduced cascade step, Hudde's progression transform, the
//! squarefree decomposition, and the two substitutions `x -> -x` and
//! `x -> G - x`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `num/den` from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense polynomial with rational coefficients; `coeffs[k]` multiplies `x^k`.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial is
/// the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Constant-first integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `x - root`.
    pub fn linear_factor(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear_factor(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Degree, rejecting the zero polynomial and anything below `required`.
    pub(crate) fn require_degree(&self, op: &'static str, required: usize) -> Result<usize> {
        let found = self.degree().ok_or(Error::ZeroPolynomial { op })?;
        if found < required {
            return Err(Error::DegreeTooLow {
                op,
                required,
                found,
            });
        }
        Ok(found)
    }

    /// Exact value at `x` by nested multiplication. The zero polynomial
    /// evaluates to zero.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp(&Rational::zero())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Positive rational `c` and integer polynomial `q` with coprime
    /// coefficients such that `self = c * q`. The leading coefficient of `q`
    /// has the same sign as that of `self`.
    pub fn primitive_part(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::one(), Vec::new());
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num_gcd = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let content = Rational::new(num_gcd, den_lcm);
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c / &content).to_integer())
            .collect();
        (content, ints)
    }

    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = divisor.require_degree("div_rem", 0)?;
        let lc = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dd] / &lc;
            if factor.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &factor * d;
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of a division known to be exact.
    pub(crate) fn exact_div(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// `self(x + shift)`, the Taylor expansion about `shift`.
    pub fn taylor_shift(&self, shift: &Rational) -> Polynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * shift;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// Sign of `self` on the whole closed interval `[lo, hi]`, when it can be
    /// certified nonzero there.
    ///
    /// Uses the Taylor expansion about the midpoint `m` with half-width `r`:
    /// `|p(x) - p(m)| <= sum_{k>=1} |t_k| r^k`. Returns `None` if that bound
    /// does not exclude zero. As the interval shrinks around a point where
    /// `p` is nonzero the test eventually succeeds.
    pub fn certified_sign(&self, lo: &Rational, hi: &Rational) -> Option<Ordering> {
        IntPoly::new(self).certified_sign(lo, hi)
    }

    /// Formal derivative. The derivative of a constant is the zero
    /// polynomial; the zero polynomial itself is rejected.
    pub fn derivative(&self) -> Result<Polynomial> {
        self.require_degree("derivative", 0)?;
        Ok(self.raw_derivative())
    }

    pub(crate) fn raw_derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial { op: "reflect" });
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        ))
    }

    /// `self(bound - x)`. Every root `r` maps to `bound - r`, which turns
    /// roots close to a large bound into small positive roots.
    pub fn translate_from_bound(&self, bound: &Rational) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial {
                op: "translate_from_bound",
            });
        }
        let outer = Self::new(vec![bound.clone(), -Rational::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &outer) + &Self::constant(c.clone());
        }
        Ok(acc)
    }

    /// Multiplies `coeffs[k]` by `start + k * step`.
    ///
    /// With `start = 0, step = 1` this is `x * p'(x)`, so any multiple root of
    /// `p` survives as a root of the transform (Hudde's rule).
    pub fn hudde_transform(&self, start: &Rational, step: &Rational) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial {
                op: "hudde_transform",
            });
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (start + step * int(k as i64)))
                .collect(),
        ))
    }
}

/// Primitive integer multiple of a polynomial, for sign tests that avoid
/// normalising fractions. Scaling by the positive content keeps every sign.
#[derive(Debug, Clone)]
pub(crate) struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub(crate) fn new(p: &Polynomial) -> Self {
        IntPoly {
            coeffs: p.primitive_part().1,
        }
    }

    pub(crate) fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Sign of `b^n p(a/b)`, which is the sign of `p(a/b)`.
    pub(crate) fn sign_at(&self, x: &Rational) -> Ordering {
        let Some((lead, rest)) = self.coeffs.split_last() else {
            return Ordering::Equal;
        };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = lead.clone();
        let mut b_pow = BigInt::one();
        for c in rest.iter().rev() {
            b_pow *= b;
            acc = acc * a + c * &b_pow;
        }
        acc.sign_ordering()
    }

    /// See [`Polynomial::certified_sign`]. With `m = a/b` and
    /// `S(u) = b^n p((a + u) / b)`, which has integer coefficients `s_k`,
    /// `p(m + d) = b^-n sum s_k (b d)^k`.
    pub(crate) fn certified_sign(&self, lo: &Rational, hi: &Rational) -> Option<Ordering> {
        let n = self.coeffs.len().checked_sub(1)?;
        let mid = (lo + hi) / int(2);
        let (a, b) = (mid.numer(), mid.denom());
        // coefficients of b^n p(x / b), then shifted by a
        let mut s: Vec<BigInt> = Vec::with_capacity(n + 1);
        let mut b_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            s.push(c * &b_pow);
            b_pow *= b;
        }
        s.reverse();
        for i in 0..n {
            for j in (i..n).rev() {
                let t = &s[j + 1] * a;
                s[j] += t;
            }
        }
        let centre = s[0].sign_ordering();
        if centre == Ordering::Equal {
            return None;
        }
        // scaled radius b (hi - lo) / 2 = num / den
        let radius = (hi - lo) * Rational::from_integer(b.clone()) / int(2);
        let (num, den) = (radius.numer(), radius.denom());
        // compare |s_0| den^n with sum_{k>=1} |s_k| num^k den^(n-k)
        let mut den_pows = vec![BigInt::one(); n + 1];
        for k in 1..=n {
            den_pows[k] = &den_pows[k - 1] * den;
        }
        let mut spread = BigInt::zero();
        let mut num_pow = BigInt::one();
        for k in 1..=n {
            num_pow *= num;
            if !s[k].is_zero() {
                spread += s[k].abs() * &num_pow * &den_pows[n - k];
            }
        }
        (s[0].abs() * &den_pows[n] > spread).then_some(centre)
    }
}

pub(crate) trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.sign().cmp(&num_bigint::Sign::NoSign)
    }
}

impl fmt::Display for Polynomial {
    /// Human syntax with descending exponents, e.g. `x^4 - 24x^3 + 3/2x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let mag = c.abs();
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Formal derivative; see [`Polynomial::derivative`].
pub fn derivative(p: &Polynomial) -> Result<Polynomial> {
    p.derivative()
}

/// One descent step of the cascade: the derivative of `p`, optionally divided
/// by its rational content and normalised to a positive leading coefficient.
///
/// Returns the new polynomial and the factor that was removed, so that
/// `derivative(p) = scaling * result`. Without content reduction the scaling
/// is 1. Scaling never moves roots.
pub fn cascade_step(p: &Polynomial, reduce_content: bool) -> Result<(Polynomial, Rational)> {
    p.require_degree("cascade_step", 1)?;
    let d = p.raw_derivative();
    if !reduce_content {
        return Ok((d, Rational::one()));
    }
    let (mut content, ints) = d.primitive_part();
    let mut reduced = Polynomial::new(ints.into_iter().map(Rational::from_integer).collect());
    if reduced.leading().is_some_and(Signed::is_negative) {
        reduced = -&reduced;
        content = -content;
    }
    Ok((reduced, content))
}

/// The derived equations of `p` from the linear one up to `p` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeChain {
    /// `levels[i]` has degree `i + 1`; the last level is the input.
    pub levels: Vec<Polynomial>,
    /// `scalings[i]` is the factor removed when `levels[i]` was derived from
    /// `levels[i + 1]`, i.e. `derivative(levels[i + 1]) = scalings[i] * levels[i]`.
    /// The top level has scaling 1.
    pub scalings: Vec<Rational>,
}

impl CascadeChain {
    pub fn top(&self) -> &Polynomial {
        self.levels.last().expect("chain is never empty")
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Descends from `p` to a linear polynomial with content-reduced steps.
pub fn cascade_chain(p: &Polynomial) -> Result<CascadeChain> {
    cascade_chain_with(p, true)
}

pub fn cascade_chain_with(p: &Polynomial, reduce_content: bool) -> Result<CascadeChain> {
    let degree = p.require_degree("cascade_chain", 1)?;
    let mut levels = vec![p.clone()];
    let mut scalings = vec![Rational::one()];
    let mut current = p.clone();
    for _ in 1..degree {
        let (next, scaling) = cascade_step(&current, reduce_content)?;
        levels.push(next.clone());
        scalings.push(scaling);
        current = next;
    }
    levels.reverse();
    scalings.reverse();
    Ok(CascadeChain { levels, scalings })
}

/// Multiplies each coefficient by a term of an arithmetic progression.
pub fn hudde_transform(p: &Polynomial, start: &Rational, step: &Rational) -> Result<Polynomial> {
    p.hudde_transform(start, step)
}

/// Yun decomposition of a polynomial into pairwise coprime squarefree factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    /// `p / gcd(p, p')`, monic.
    pub part: Polynomial,
    /// Monic factors with their multiplicities, ascending by multiplicity;
    /// `p = lc(p) * prod factor^multiplicity`.
    pub factors: Vec<(Polynomial, u32)>,
}

impl SquarefreeDecomposition {
    /// Multiplicity of the factor vanishing at `x`, if any.
    pub fn multiplicity_at(&self, x: &Rational) -> Option<u32> {
        self.factors
            .iter()
            .find(|(f, _)| f.eval(x).is_zero())
            .map(|(_, m)| *m)
    }

    /// Multiplicity of the root bracketed by `(lo, hi)`, where the interval
    /// isolates a single root of `part` and neither endpoint is a root.
    pub fn multiplicity_in(&self, lo: &Rational, hi: &Rational) -> Option<u32> {
        self.factors
            .iter()
            .find(|(f, _)| f.sign_at(lo) != f.sign_at(hi))
            .map(|(_, m)| *m)
    }
}

/// Squarefree part of `p` and the multiplicity structure of its roots.
pub fn squarefree_part(p: &Polynomial) -> Result<SquarefreeDecomposition> {
    p.require_degree("squarefree_part", 1)?;
    let dp = p.raw_derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0);
    let part = b.monic();
    let mut c = dp.exact_div(&a0);
    let mut d = &c - &b.raw_derivative();
    let mut factors = Vec::new();
    let mut multiplicity = 1;
    while b.degree().is_some_and(|deg| deg > 0) {
        let a = b.gcd(&d);
        let nb = b.exact_div(&a);
        c = d.exact_div(&a);
        if a.degree().is_some_and(|deg| deg > 0) {
            factors.push((a, multiplicity));
        }
        b = nb;
        d = &c - &b.raw_derivative();
        multiplicity += 1;
    }
    Ok(SquarefreeDecomposition { part, factors })
}
