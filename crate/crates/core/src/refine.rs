//! Refinement of a bracketed root: Bolzano's bisection, the method of false
//! position, and Newton's tangent iteration with an optional bisection
//! safeguard.
//!
//! Iterates are exact rationals. False-position and Newton iterates whose
//! denominators outgrow `2^round_bits` are rounded to the nearest multiple of
//! `2^-round_bits`; the bracket is always re-evaluated exactly afterwards, so
//! rounding never weakens a certificate.
//!
//! All three methods also run a rational-root test: once the bracket is
//! narrower than `1/lc` (`lc` the leading coefficient of the primitive
//! integer form of the polynomial) it holds at most one candidate `m/lc`,
//! and a root there is reported exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::isolate::{sign_change, IsolatedRoot, IntervalRoots, SignCertificate};
use crate::poly::{int, Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bisection,
    FalsePosition,
    Newton,
    NewtonSafeguarded,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bisection => "bisection",
            Method::FalsePosition => "false_position",
            Method::Newton => "newton",
            Method::NewtonSafeguarded => "newton_safeguarded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The enclosure is no wider than the tolerance.
    Converged,
    /// An iterate or probe hit a root exactly.
    ExactRoot(Rational),
    /// The iteration budget ran out first.
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Bisection,
    FalsePosition,
    Newton,
    /// Bisection taken by safeguarded Newton in place of a rejected iterate.
    SafeguardBisection,
    /// Probe at a tolerance-wide offset that closes the bracket around a
    /// converged iterate.
    Closing,
    /// Probe at the unique rational-root candidate.
    RationalCandidate,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Bisection => "bisection",
            StepKind::FalsePosition => "false_position",
            StepKind::Newton => "newton",
            StepKind::SafeguardBisection => "safeguard_bisection",
            StepKind::Closing => "closing",
            StepKind::RationalCandidate => "rational_candidate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    /// Point evaluated in this step.
    pub point: Rational,
    /// Enclosure after the step, if the method keeps one.
    pub enclosure: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootApproximation {
    pub lo: Rational,
    pub hi: Rational,
    pub iterations: usize,
    pub method: Method,
    pub outcome: Outcome,
    pub trace: Option<Vec<TraceStep>>,
}

impl RootApproximation {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineOptions {
    pub trace: bool,
    /// Dyadic grid for rounding iterates; `None` keeps them exact.
    pub round_bits: Option<u64>,
    pub detect_rational: bool,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            trace: false,
            round_bits: Some(256),
            detect_rational: true,
        }
    }
}

impl RefineOptions {
    pub fn traced() -> Self {
        RefineOptions {
            trace: true,
            ..Self::default()
        }
    }
}

/// Rounds to the nearest multiple of `2^-bits` when the denominator is
/// larger than `2^bits`.
pub fn round_dyadic(x: &Rational, bits: u64) -> Rational {
    if x.denom().bits() <= bits {
        return x.clone();
    }
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

/// Sign-change bracket being refined, with the sign of `p` at `lo`.
struct Bracket<'a> {
    p: &'a Polynomial,
    lo: Rational,
    hi: Rational,
    f_lo: Rational,
    f_hi: Rational,
    /// Leading coefficient of the primitive integer form, for the
    /// rational-root test.
    lattice: Rational,
    candidate_tested: bool,
    trace: Option<Vec<TraceStep>>,
}

enum Probe {
    Root(Rational),
    Narrowed,
}

impl<'a> Bracket<'a> {
    fn new(
        p: &'a Polynomial,
        cert: &SignCertificate,
        op: &'static str,
        opts: &RefineOptions,
    ) -> Result<Self> {
        if !cert.is_sign_change() {
            return Err(Error::NoSignChange { op });
        }
        let (_, ints) = p.primitive_part();
        let lattice = Rational::from_integer(ints.last().expect("nonzero polynomial").abs());
        Ok(Bracket {
            p,
            lo: cert.lo.clone(),
            hi: cert.hi.clone(),
            f_lo: cert.f_lo.clone(),
            f_hi: cert.f_hi.clone(),
            lattice,
            candidate_tested: !opts.detect_rational,
            trace: opts.trace.then(Vec::new),
        })
    }

    fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    fn record(&mut self, kind: StepKind, point: &Rational) {
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceStep {
                kind,
                point: point.clone(),
                enclosure: Some((self.lo.clone(), self.hi.clone())),
            });
        }
    }

    /// Evaluates at an interior point and keeps the half with the sign
    /// change.
    fn probe(&mut self, x: Rational, kind: StepKind) -> Probe {
        debug_assert!(self.contains(&x));
        let fx = self.p.eval(&x);
        if fx.is_zero() {
            self.lo = x.clone();
            self.hi = x.clone();
            self.record(kind, &x);
            return Probe::Root(x);
        }
        if fx.is_negative() == self.f_lo.is_negative() {
            self.lo = x.clone();
            self.f_lo = fx;
        } else {
            self.hi = x.clone();
            self.f_hi = fx;
        }
        self.record(kind, &x);
        Probe::Narrowed
    }

    /// Tests the single rational-root candidate once the bracket is narrow
    /// enough to hold at most one.
    fn rational_candidate(&mut self) -> Option<Rational> {
        if self.candidate_tested || self.width() * &self.lattice >= Rational::one() {
            return None;
        }
        self.candidate_tested = true;
        let m = (&self.lo * &self.lattice).floor().to_integer() + 1;
        let candidate = Rational::from_integer(m) / &self.lattice;
        if !self.contains(&candidate) || !self.p.eval(&candidate).is_zero() {
            return None;
        }
        self.lo = candidate.clone();
        self.hi = candidate.clone();
        self.record(StepKind::RationalCandidate, &candidate);
        Some(candidate)
    }

    /// Tries to close the bracket to width `tol` around a converged iterate
    /// `x`. Returns a root if one of the probes hits it exactly.
    fn close_around(&mut self, x: &Rational, tol: &Rational) -> Option<Rational> {
        let half = tol / int(2);
        for point in [x - &half, x.clone(), x + &half] {
            if self.width() <= *tol {
                break;
            }
            if self.contains(&point) {
                if let Probe::Root(r) = self.probe(point, StepKind::Closing) {
                    return Some(r);
                }
            }
        }
        None
    }

    fn finish(self, iterations: usize, method: Method, outcome: Outcome) -> RootApproximation {
        RootApproximation {
            lo: self.lo,
            hi: self.hi,
            iterations,
            method,
            outcome,
            trace: self.trace,
        }
    }
}

fn check_tolerance(tol: &Rational) -> Result<()> {
    if tol.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveTolerance)
    }
}

/// Halves the bracket until its width is at most `tol`. After `k` steps
/// without an exact hit the width is exactly `(hi - lo) / 2^k`.
pub fn bisect(
    p: &Polynomial,
    cert: &SignCertificate,
    tol: &Rational,
    opts: &RefineOptions,
) -> Result<RootApproximation> {
    check_tolerance(tol)?;
    let mut b = Bracket::new(p, cert, "bisect", opts)?;
    let mut iterations = 0;
    loop {
        if let Some(r) = b.rational_candidate() {
            return Ok(b.finish(iterations, Method::Bisection, Outcome::ExactRoot(r)));
        }
        if b.width() <= *tol {
            return Ok(b.finish(iterations, Method::Bisection, Outcome::Converged));
        }
        let mid = b.midpoint();
        iterations += 1;
        if let Probe::Root(r) = b.probe(mid, StepKind::Bisection) {
            return Ok(b.finish(iterations, Method::Bisection, Outcome::ExactRoot(r)));
        }
    }
}

/// Regula falsi: probes where the chord through the bracket ends meets the
/// axis. When successive iterates move by at most `tol` the bracket is
/// closed around the latest one.
pub fn false_position(
    p: &Polynomial,
    cert: &SignCertificate,
    tol: &Rational,
    max_iter: usize,
    opts: &RefineOptions,
) -> Result<RootApproximation> {
    check_tolerance(tol)?;
    if max_iter == 0 {
        return Err(Error::ZeroIterationLimit);
    }
    let mut b = Bracket::new(p, cert, "false_position", opts)?;
    let method = Method::FalsePosition;
    let mut previous: Option<Rational> = None;
    for iterations in 0..max_iter {
        if let Some(r) = b.rational_candidate() {
            return Ok(b.finish(iterations, method, Outcome::ExactRoot(r)));
        }
        if b.width() <= *tol {
            return Ok(b.finish(iterations, method, Outcome::Converged));
        }
        let mut x = (&b.lo * &b.f_hi - &b.hi * &b.f_lo) / (&b.f_hi - &b.f_lo);
        if let Some(bits) = opts.round_bits {
            x = round_dyadic(&x, bits);
        }
        if !b.contains(&x) {
            x = b.midpoint();
        }
        if let Probe::Root(r) = b.probe(x.clone(), StepKind::FalsePosition) {
            return Ok(b.finish(iterations + 1, method, Outcome::ExactRoot(r)));
        }
        if previous.as_ref().is_some_and(|prev| (&x - prev).abs() <= *tol) {
            if let Some(r) = b.close_around(&x, tol) {
                return Ok(b.finish(iterations + 1, method, Outcome::ExactRoot(r)));
            }
        }
        previous = Some(x);
    }
    if let Some(r) = b.rational_candidate() {
        return Ok(b.finish(max_iter, method, Outcome::ExactRoot(r)));
    }
    let outcome = if b.width() <= *tol {
        Outcome::Converged
    } else {
        Outcome::IterationLimit
    };
    Ok(b.finish(max_iter, method, outcome))
}

/// Newton's tangent iteration `x <- x - p(x)/p'(x)` from `x0`.
///
/// Convergence is declared when an iterate moves by at most `tol` and a
/// sign change (or exact zero) is found within `tol` of it. With a
/// safeguard certificate, iterates that leave the bracket or meet a
/// vanishing derivative are replaced by a bisection step; without one a
/// vanishing derivative is an error.
pub fn newton_refine(
    p: &Polynomial,
    x0: &Rational,
    tol: &Rational,
    max_iter: usize,
    safeguard: Option<&SignCertificate>,
    opts: &RefineOptions,
) -> Result<RootApproximation> {
    check_tolerance(tol)?;
    if max_iter == 0 {
        return Err(Error::ZeroIterationLimit);
    }
    let dp = p.derivative()?;
    match safeguard {
        Some(cert) => newton_safeguarded(p, &dp, x0, tol, max_iter, cert, opts),
        None => newton_plain(p, &dp, x0, tol, max_iter, opts),
    }
}

fn newton_safeguarded(
    p: &Polynomial,
    dp: &Polynomial,
    x0: &Rational,
    tol: &Rational,
    max_iter: usize,
    cert: &SignCertificate,
    opts: &RefineOptions,
) -> Result<RootApproximation> {
    let method = Method::NewtonSafeguarded;
    let mut b = Bracket::new(p, cert, "newton_refine", opts)?;
    let mut x = if b.contains(x0) { x0.clone() } else { b.midpoint() };
    if let Probe::Root(r) = b.probe(x.clone(), StepKind::Newton) {
        return Ok(b.finish(0, method, Outcome::ExactRoot(r)));
    }
    for iterations in 1..=max_iter {
        if let Some(r) = b.rational_candidate() {
            return Ok(b.finish(iterations - 1, method, Outcome::ExactRoot(r)));
        }
        if b.width() <= *tol {
            return Ok(b.finish(iterations - 1, method, Outcome::Converged));
        }
        let slope = dp.eval(&x);
        let mut kind = StepKind::Newton;
        let mut next = if slope.is_zero() {
            None
        } else {
            let mut n = &x - p.eval(&x) / slope;
            if let Some(bits) = opts.round_bits {
                n = round_dyadic(&n, bits);
            }
            Some(n)
        };
        if !next.as_ref().is_some_and(|n| b.contains(n)) {
            next = Some(b.midpoint());
            kind = StepKind::SafeguardBisection;
        }
        let next = next.expect("set above");
        let step = (&next - &x).abs();
        x = next;
        if let Probe::Root(r) = b.probe(x.clone(), kind) {
            return Ok(b.finish(iterations, method, Outcome::ExactRoot(r)));
        }
        if kind == StepKind::Newton && step <= *tol {
            if let Some(r) = b.close_around(&x, tol) {
                return Ok(b.finish(iterations, method, Outcome::ExactRoot(r)));
            }
        }
    }
    if let Some(r) = b.rational_candidate() {
        return Ok(b.finish(max_iter, method, Outcome::ExactRoot(r)));
    }
    let outcome = if b.width() <= *tol {
        Outcome::Converged
    } else {
        Outcome::IterationLimit
    };
    Ok(b.finish(max_iter, method, outcome))
}

fn newton_plain(
    p: &Polynomial,
    dp: &Polynomial,
    x0: &Rational,
    tol: &Rational,
    max_iter: usize,
    opts: &RefineOptions,
) -> Result<RootApproximation> {
    let method = Method::Newton;
    let mut trace = opts.trace.then(Vec::new);
    let (_, ints) = p.primitive_part();
    let lattice = Rational::from_integer(ints.last().expect("nonzero").abs());
    let half = tol / int(2);
    let mut x = x0.clone();
    let done = |lo: Rational, hi: Rational, iterations, outcome, trace| RootApproximation {
        lo,
        hi,
        iterations,
        method,
        outcome,
        trace,
    };
    for iterations in 0..=max_iter {
        let fx = p.eval(&x);
        if fx.is_zero() {
            return Ok(done(x.clone(), x.clone(), iterations, Outcome::ExactRoot(x), trace));
        }
        if iterations == max_iter {
            break;
        }
        let slope = dp.eval(&x);
        if slope.is_zero() {
            return Err(Error::DerivativeVanished { at: x.to_string() });
        }
        let mut next = &x - fx / slope;
        if let Some(bits) = opts.round_bits {
            next = round_dyadic(&next, bits);
        }
        let step = (&next - &x).abs();
        x = next;
        if let Some(t) = trace.as_mut() {
            t.push(TraceStep {
                kind: StepKind::Newton,
                point: x.clone(),
                enclosure: None,
            });
        }
        if step > *tol {
            continue;
        }
        // Re-certify: a sign change or exact zero within tol/2 of x.
        let (a, c) = (&x - &half, &x + &half);
        let fx = p.eval(&x);
        if fx.is_zero() {
            return Ok(done(x.clone(), x.clone(), iterations + 1, Outcome::ExactRoot(x), trace));
        }
        let cert = sign_change(p, &a, &c)?;
        let fa = cert.f_lo.sign_cmp();
        let fc = cert.f_hi.sign_cmp();
        let f_mid = fx.sign_cmp();
        for (point, s) in [(&a, fa), (&c, fc)] {
            if s == Ordering::Equal {
                let r = point.clone();
                return Ok(done(r.clone(), r.clone(), iterations + 1, Outcome::ExactRoot(r), trace));
            }
        }
        if fa != f_mid || fc != f_mid {
            let (lo, hi) = if fa != f_mid { (a, x.clone()) } else { (x.clone(), c) };
            if opts.detect_rational && (&hi - &lo) * &lattice < Rational::one() {
                let m = (&lo * &lattice).floor().to_integer() + 1;
                let candidate = Rational::from_integer(m) / &lattice;
                if lo < candidate && candidate < hi && p.eval(&candidate).is_zero() {
                    return Ok(done(
                        candidate.clone(),
                        candidate.clone(),
                        iterations + 1,
                        Outcome::ExactRoot(candidate),
                        trace,
                    ));
                }
            }
            return Ok(done(lo, hi, iterations + 1, Outcome::Converged, trace));
        }
        if opts.detect_rational && tol * &lattice < Rational::one() {
            // No sign change near x: the iterate may be approaching a root of
            // even multiplicity, which only the exact candidate can confirm.
            let m = (&a * &lattice).floor().to_integer() + 1;
            let candidate = Rational::from_integer(m) / &lattice;
            if a < candidate && candidate < c && p.eval(&candidate).is_zero() {
                return Ok(done(
                    candidate.clone(),
                    candidate.clone(),
                    iterations + 1,
                    Outcome::ExactRoot(candidate),
                    trace,
                ));
            }
        }
    }
    Ok(done(x.clone(), x, max_iter, Outcome::IterationLimit, trace))
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for Rational {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&Rational::zero())
    }
}

/// Roots of `p(x) = value` inside `(lo, hi)`, together with any exact
/// solutions on the endpoints (excluded from `roots` since the interval is
/// open).
///
/// `value` must lie between `p(lo)` and `p(hi)` (inclusive). When it lies
/// strictly between them the intermediate value theorem guarantees at least
/// one root. The two-function form `f(x) = g(x)` reduces to this with
/// `f - g` and value zero.
pub fn solve_intermediate(
    p: &Polynomial,
    value: &Rational,
    lo: &Rational,
    hi: &Rational,
) -> Result<IntervalRoots> {
    p.require_degree("solve_intermediate", 1)?;
    if lo >= hi {
        return Err(Error::EmptyInterval {
            op: "solve_intermediate",
        });
    }
    let (f_lo, f_hi) = (p.eval(lo), p.eval(hi));
    let (min, max) = if f_lo <= f_hi { (&f_lo, &f_hi) } else { (&f_hi, &f_lo) };
    if value < min || value > max {
        return Err(Error::Precondition(format!(
            "value {value} is not between p({lo}) = {f_lo} and p({hi}) = {f_hi}"
        )));
    }
    let shifted = p - &Polynomial::constant(value.clone());
    crate::isolate::isolate_in_interval(&shifted, lo, hi)
}

/// Convenience: bisects every bracketed root of a list to width `tol`,
/// leaving exact roots untouched. `p` must be the polynomial the
/// certificates refer to.
pub fn refine_all(p: &Polynomial, roots: &[IsolatedRoot], tol: &Rational) -> Result<Vec<RootApproximation>> {
    roots
        .iter()
        .map(|r| match r.certificate() {
            Some(c) => bisect(p, c, tol, &RefineOptions::default()),
            None => {
                let x = r.lo().clone();
                Ok(RootApproximation {
                    lo: x.clone(),
                    hi: x.clone(),
                    iterations: 0,
                    method: Method::Bisection,
                    outcome: Outcome::ExactRoot(x),
                    trace: None,
                })
            }
        })
        .collect()
}
