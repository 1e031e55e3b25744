//! Theorem-level checks on isolated roots, and an independent oracle.
//!
//! [`check_interleaving`] verifies that the real roots of a polynomial and
//! of its derivative interleave: an odd number of derivative roots (counted
//! with multiplicity) between neighbouring roots, at most one root between
//! neighbouring derivative roots, and at most one root beyond each extreme
//! derivative root. [`rolle_point`] locates the derivative roots promised
//! between two equal values, and [`check_derivative_sign_flip`] confirms that
//! the derivative has opposite signs at adjacent simple roots.
//!
//! [`grid_scan_oracle`] counts roots by brute-force evaluation on an even
//! grid using integer arithmetic. It shares nothing with the cascade code
//! and exists to cross-check it.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::isolate::{
    isolate_all_roots, isolate_in_interval, narrow, sign_at_isolated, IsolatedRoot, RootKind,
    SignCertificate, SignConclusion,
};
use crate::poly::{int, squarefree_part, Polynomial, Rational};

/// Derivative roots found between two neighbouring roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    /// Indices into `p_roots` of the flanking roots.
    pub left: usize,
    pub right: usize,
    /// Derivative roots strictly inside, counted with multiplicity.
    pub count: u32,
    /// Distinct derivative roots strictly inside.
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavingReport {
    /// Real roots of the squarefree part of the input, ascending. Brackets
    /// refer to that squarefree part.
    pub p_roots: Vec<IsolatedRoot>,
    /// Real roots of its derivative, ascending. Brackets refer to the
    /// squarefree part of the derivative.
    pub dp_roots: Vec<IsolatedRoot>,
    pub gaps: Vec<Gap>,
    /// Derivative roots (with multiplicity) below the least root. When there
    /// are no real roots every derivative root is counted here.
    pub below: u32,
    /// Derivative roots (with multiplicity) above the greatest root.
    pub above: u32,
    /// Roots lying below the least derivative root.
    pub roots_below_derivative: usize,
    /// Roots lying above the greatest derivative root.
    pub roots_above_derivative: usize,
    /// Empty on every valid input; anything here is a bug.
    pub violations: Vec<String>,
}

impl InterleavingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn overlaps(a: &IsolatedRoot, b: &IsolatedRoot) -> bool {
    match (&a.kind, &b.kind) {
        (RootKind::Exact(x), RootKind::Exact(y)) => x == y,
        (RootKind::Exact(x), RootKind::Bracketed(c)) | (RootKind::Bracketed(c), RootKind::Exact(x)) => {
            &c.lo < x && x < &c.hi
        }
        (RootKind::Bracketed(c), RootKind::Bracketed(d)) => c.lo < d.hi && d.lo < c.hi,
    }
}

/// Halves a bracketed root against the polynomial its certificate refers to.
fn halve(root: &mut IsolatedRoot, witness: &Polynomial) {
    if let RootKind::Bracketed(c) = &root.kind {
        let mid = (&c.lo + &c.hi) / int(2);
        let n = narrow(witness, c, &mid).expect("bracket carries a sign change");
        root.kind = match n.conclusion {
            SignConclusion::ExactRootAtHi => RootKind::Exact(n.hi),
            _ => RootKind::Bracketed(n),
        };
    }
}

fn width(root: &IsolatedRoot) -> Rational {
    root.hi() - root.lo()
}

/// Refines brackets until no root of `a` overlaps a root of `b`. The two
/// sets must not share a root.
fn separate(a: &mut [IsolatedRoot], wa: &Polynomial, b: &mut [IsolatedRoot], wb: &Polynomial) {
    loop {
        let mut clash = None;
        'search: for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if overlaps(x, y) {
                    clash = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = clash else { return };
        assert!(
            !(a[i].exact().is_some() && b[j].exact().is_some()),
            "root sets are not disjoint"
        );
        if width(&a[i]) >= width(&b[j]) {
            halve(&mut a[i], wa);
        } else {
            halve(&mut b[j], wb);
        }
    }
}

/// Checks the interleaving of the real roots of `p` and `p'`.
pub fn check_interleaving(p: &Polynomial) -> Result<InterleavingReport> {
    p.require_degree("check_interleaving", 2)?;
    let sqf = squarefree_part(p)?.part;
    let dp = sqf.raw_derivative();
    let mut p_roots = isolate_all_roots(&sqf)?;
    let (mut dp_roots, dp_witness) = if dp.degree().is_some_and(|d| d >= 1) {
        let w = squarefree_part(&dp)?.part;
        (isolate_all_roots(&dp)?, w)
    } else {
        (Vec::new(), Polynomial::one())
    };
    separate(&mut p_roots, &sqf, &mut dp_roots, &dp_witness);

    // Position of every derivative root relative to the roots of p.
    let before = |d: &IsolatedRoot, r: &IsolatedRoot| d.hi() <= r.lo();
    let mut violations = Vec::new();
    let mut gaps = Vec::new();
    for (left, pair) in p_roots.windows(2).enumerate() {
        let inside: Vec<&IsolatedRoot> = dp_roots
            .iter()
            .filter(|d| before(&pair[0], d) && before(d, &pair[1]))
            .collect();
        let count = inside.iter().map(|d| d.multiplicity).sum();
        let gap = Gap {
            left,
            right: left + 1,
            count,
            distinct: inside.len(),
        };
        if count % 2 == 0 {
            violations.push(format!(
                "between roots {} and {}: {} derivative roots, expected an odd number",
                left,
                left + 1,
                count
            ));
        }
        gaps.push(gap);
    }

    let total: u32 = dp_roots.iter().map(|d| d.multiplicity).sum();
    let (below, above) = match (p_roots.first(), p_roots.last()) {
        (Some(first), Some(last)) => (
            dp_roots
                .iter()
                .filter(|d| before(d, first))
                .map(|d| d.multiplicity)
                .sum(),
            dp_roots
                .iter()
                .filter(|d| before(last, d))
                .map(|d| d.multiplicity)
                .sum(),
        ),
        _ => (total, 0),
    };

    for (k, pair) in dp_roots.windows(2).enumerate() {
        let between = p_roots
            .iter()
            .filter(|r| before(&pair[0], r) && before(r, &pair[1]))
            .count();
        if between > 1 {
            violations.push(format!(
                "between derivative roots {} and {}: {} roots, expected at most one",
                k,
                k + 1,
                between
            ));
        }
    }
    let (roots_below_derivative, roots_above_derivative) = match (dp_roots.first(), dp_roots.last()) {
        (Some(first), Some(last)) => (
            p_roots.iter().filter(|r| before(r, first)).count(),
            p_roots.iter().filter(|r| before(last, r)).count(),
        ),
        _ => (p_roots.len(), p_roots.len()),
    };
    if roots_below_derivative > 1 {
        violations.push(format!(
            "{roots_below_derivative} roots below the least derivative root, expected at most one"
        ));
    }
    if roots_above_derivative > 1 {
        violations.push(format!(
            "{roots_above_derivative} roots above the greatest derivative root, expected at most one"
        ));
    }

    Ok(InterleavingReport {
        p_roots,
        dp_roots,
        gaps,
        below,
        above,
        roots_below_derivative,
        roots_above_derivative,
        violations,
    })
}

/// Roots of `p'` strictly between two points where `p` takes the same value.
/// Never empty when the precondition holds.
pub fn rolle_point(p: &Polynomial, a: &Rational, b: &Rational) -> Result<Vec<IsolatedRoot>> {
    p.require_degree("rolle_point", 1)?;
    if a >= b {
        return Err(Error::EmptyInterval { op: "rolle_point" });
    }
    let (fa, fb) = (p.eval(a), p.eval(b));
    if fa != fb {
        return Err(Error::Precondition(format!(
            "p({a}) = {fa} differs from p({b}) = {fb}"
        )));
    }
    let dp = p.derivative()?;
    Ok(isolate_in_interval(&dp, a, b)?.roots)
}

/// Brute-force root scan: evaluates `p` at `steps + 1` equally spaced points
/// of `[lo, hi]` and returns a certificate for every cell with a sign change
/// or an exact zero. A zero on an interior grid point is reported once, by
/// the cell that starts there; a zero at `hi` by the last cell.
///
/// The zero polynomial, an empty interval, or `steps == 0` yield no cells.
pub fn grid_scan_oracle(p: &Polynomial, lo: &Rational, hi: &Rational, steps: usize) -> Vec<SignCertificate> {
    if p.is_zero() || lo >= hi || steps == 0 {
        return Vec::new();
    }
    // Grid points x_k = (a * steps + k * (b - a)) / (den * steps) over a
    // common denominator; p(x_k) has the sign of the homogenised integer sum
    // sum_i c_i n_k^i M^(d - i).
    let den = lo.denom() * hi.denom();
    let a = lo.numer() * hi.denom();
    let b = hi.numer() * lo.denom();
    let n_steps = BigInt::from(steps);
    let m = &den * &n_steps;
    let (_, ints) = p.primitive_part();
    let degree = ints.len() - 1;
    let mut m_pow = vec![BigInt::one(); degree + 1];
    for i in 1..=degree {
        m_pow[i] = &m_pow[i - 1] * &m;
    }
    let start = &a * &n_steps;
    let stride = &b - &a;
    let sign_at = |k: usize| -> Ordering {
        let n = &start + &stride * BigInt::from(k);
        let mut v = ints[degree].clone();
        for i in (0..degree).rev() {
            v = v * &n + &ints[i] * &m_pow[degree - i];
        }
        v.sign_cmp()
    };
    let point = |k: usize| -> Rational {
        Rational::new(&start + &stride * BigInt::from(k), m.clone())
    };

    let mut out = Vec::new();
    let mut prev = sign_at(0);
    for k in 0..steps {
        let next = sign_at(k + 1);
        let hit = prev == Ordering::Equal
            || (k + 1 == steps && next == Ordering::Equal)
            || (prev != Ordering::Equal && next != Ordering::Equal && prev != next);
        if hit {
            let (x0, x1) = (point(k), point(k + 1));
            let (f0, f1) = (p.eval(&x0), p.eval(&x1));
            let conclusion = if f0.is_zero() {
                SignConclusion::ExactRootAtLo
            } else if f1.is_zero() {
                SignConclusion::ExactRootAtHi
            } else {
                SignConclusion::SignChange
            };
            out.push(SignCertificate {
                lo: x0,
                hi: x1,
                f_lo: f0,
                f_hi: f1,
                conclusion,
            });
        }
        prev = next;
    }
    out
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

fn same_root(a: &IsolatedRoot, b: &IsolatedRoot) -> bool {
    match (&a.kind, &b.kind) {
        (RootKind::Bracketed(c), RootKind::Bracketed(d)) => c.lo < d.hi && d.lo < c.hi,
        _ => overlaps(a, b),
    }
}

/// Whether `p'` has opposite signs at two adjacent simple real roots of `p`.
///
/// Both roots must be as returned by [`isolate_all_roots`] on `p` (brackets
/// refer to the squarefree part of `p`) and must be neighbours among the
/// real roots of `p`, each of multiplicity one.
pub fn check_derivative_sign_flip(p: &Polynomial, r1: &IsolatedRoot, r2: &IsolatedRoot) -> Result<bool> {
    p.require_degree("check_derivative_sign_flip", 2)?;
    let roots = isolate_all_roots(p)?;
    let index_of = |r: &IsolatedRoot| roots.iter().position(|x| same_root(x, r));
    let (Some(i), Some(j)) = (index_of(r1), index_of(r2)) else {
        return Err(Error::Precondition("root is not a real root of p".into()));
    };
    if i.abs_diff(j) != 1 {
        return Err(Error::Precondition("roots are not adjacent".into()));
    }
    if roots[i].multiplicity != 1 || roots[j].multiplicity != 1 {
        return Err(Error::Precondition("roots must be simple".into()));
    }
    let sqf = squarefree_part(p)?.part;
    let dp = p.derivative()?;
    let s1 = sign_at_isolated(&dp, r1, &sqf);
    let s2 = sign_at_isolated(&dp, r2, &sqf);
    Ok(s1 != Ordering::Equal && s2 != Ordering::Equal && s1 != s2)
}
