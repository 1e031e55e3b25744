//! A-priori bounds on where the roots of a polynomial can lie.
//!
//! The great hypothesis `a/c + 1` (with `a` the largest magnitude among the
//! negative coefficients and `c` the leading coefficient) is a strict upper
//! bound for the positive roots. The small hypothesis is zero. Newton's bound
//! is the square root of the sum of the squared roots, which majorises the
//! magnitude of every real root whenever that sum is nonnegative.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::poly::{int, Polynomial, Rational};

/// Fractional bits used when rounding a square root upward to a dyadic.
pub const SQRT_FRACTION_BITS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFlag {
    /// No coefficient is negative once the leading coefficient is positive,
    /// so there are no positive roots and the great hypothesis defaults to 1.
    NoNegativeCoefficient,
    /// The sum of squared roots is negative (complex roots dominate); the
    /// Newton bound falls back to the great hypothesis.
    NewtonFallback,
}

impl BoundFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundFlag::NoNegativeCoefficient => "no_negative_coefficient",
            BoundFlag::NewtonFallback => "newton_fallback",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBounds {
    /// Lower bound for positive roots; always zero.
    pub small: Rational,
    /// Strict upper bound for positive roots.
    pub great: Rational,
    /// Upper bound on the magnitude of every real root; `None` when the
    /// polynomial is linear and Newton's bound is undefined.
    pub newton: Option<Rational>,
    /// Power sum of squared roots, when defined.
    pub sum_of_squares: Option<Rational>,
    pub flags: Vec<BoundFlag>,
}

fn normalise_sign(p: &Polynomial) -> Polynomial {
    match p.leading() {
        Some(lc) if lc.is_negative() => -p,
        _ => p.clone(),
    }
}

/// Rolle's great hypothesis `a/c + 1`, or 1 when no coefficient is negative.
///
/// The polynomial is negated first if its leading coefficient is negative.
pub fn great_hypothesis(p: &Polynomial) -> Result<Rational> {
    p.require_degree("great_hypothesis", 1)?;
    Ok(great_with_flag(p).0)
}

fn great_with_flag(p: &Polynomial) -> (Rational, bool) {
    let q = normalise_sign(p);
    let lc = q.leading().expect("nonzero").clone();
    let largest_negative = q
        .coeffs()
        .iter()
        .filter(|c| c.is_negative())
        .map(Signed::abs)
        .max();
    match largest_negative {
        Some(a) => (a / lc + Rational::one(), false),
        None => (Rational::one(), true),
    }
}

/// Rolle's small hypothesis: only positive roots are sought, so zero lies
/// below every one of them.
pub fn small_hypothesis(_p: &Polynomial) -> Rational {
    Rational::zero()
}

/// Sum of squared roots `e1^2 - 2 e2` read from the two leading coefficients.
pub fn sum_of_squared_roots(p: &Polynomial) -> Result<Rational> {
    let n = p.require_degree("newton_bound", 2)?;
    let monic = p.monic();
    let e1 = -monic.coeff(n - 1);
    let e2 = monic.coeff(n - 2);
    Ok(&e1 * &e1 - int(2) * e2)
}

/// Smallest `m / 2^bits` that is `>= sqrt(x)`, for `x >= 0`.
pub fn dyadic_sqrt_ceil(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "square root of a negative rational");
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = x * Rational::from_integer(scale);
    // ceil(sqrt(num/den)): start from floor(sqrt(floor(num/den))) and step up.
    let mut m = scaled.floor().to_integer().sqrt();
    let numer = scaled.numer();
    let denom = scaled.denom();
    while &m * &m * denom < *numer {
        m += 1;
    }
    Rational::new(m, BigInt::one() << bits as usize)
}

/// Newton's bound: `sqrt(sum of squared roots)` rounded up to a dyadic with
/// [`SQRT_FRACTION_BITS`] fractional bits. Returns the bound and whether it
/// fell back to the great hypothesis because the sum was negative.
pub fn newton_bound(p: &Polynomial) -> Result<(Rational, bool)> {
    let s2 = sum_of_squared_roots(p)?;
    if s2.is_negative() {
        return Ok((great_with_flag(p).0, true));
    }
    Ok((dyadic_sqrt_ceil(&s2, SQRT_FRACTION_BITS), false))
}

/// All bounds at once, with flags.
pub fn root_bounds(p: &Polynomial) -> Result<RootBounds> {
    let degree = p.require_degree("root_bounds", 1)?;
    let (great, no_negative) = great_with_flag(p);
    let mut flags = Vec::new();
    if no_negative {
        flags.push(BoundFlag::NoNegativeCoefficient);
    }
    let (newton, sum_of_squares) = if degree >= 2 {
        let s2 = sum_of_squared_roots(p)?;
        let (bound, fallback) = newton_bound(p)?;
        if fallback {
            flags.push(BoundFlag::NewtonFallback);
        }
        (Some(bound), Some(s2))
    } else {
        (None, None)
    };
    Ok(RootBounds {
        small: small_hypothesis(p),
        great,
        newton,
        sum_of_squares,
        flags,
    })
}
