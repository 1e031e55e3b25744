//! Root isolation by the method of cascades.
//!
//! The chain of derived polynomials is solved bottom-up. The linear level is
//! solved exactly. On every higher level the positive roots of the level
//! below, together with zero and the great hypothesis of the current level,
//! cut the half-line into intervals on which the current polynomial is
//! monotone. Each interval whose ends carry opposite signs therefore holds
//! exactly one root, and that root becomes a boundary point for the next
//! level up.
//!
//! Boundary points that are irrational are carried as enclosures. Their sign
//! on the next level is decided by refining the enclosure until the next
//! polynomial is provably nonzero on it; if it is not nonzero after the
//! enclosure is narrower than [`GCD_FALLBACK_WIDTH_BITS`] bits, a gcd decides
//! exactly whether the two levels share the root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bounds::great_hypothesis;
use crate::error::{Error, Result};
use crate::poly::{
    cascade_chain, int, squarefree_part, IntPoly, Polynomial, Rational, SquarefreeDecomposition,
};

/// Enclosures narrower than `2^-GCD_FALLBACK_WIDTH_BITS` trigger the exact
/// shared-root test.
pub const GCD_FALLBACK_WIDTH_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConclusion {
    SignChange,
    NoSignChange,
    ExactRootAtLo,
    ExactRootAtHi,
}

impl SignConclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            SignConclusion::SignChange => "sign_change",
            SignConclusion::NoSignChange => "no_sign_change",
            SignConclusion::ExactRootAtLo => "exact_root_at_lo",
            SignConclusion::ExactRootAtHi => "exact_root_at_hi",
        }
    }
}

/// Exact endpoint values of a polynomial on `[lo, hi]` and what they prove.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCertificate {
    pub lo: Rational,
    pub hi: Rational,
    pub f_lo: Rational,
    pub f_hi: Rational,
    pub conclusion: SignConclusion,
}

impl SignCertificate {
    fn from_values(lo: Rational, hi: Rational, f_lo: Rational, f_hi: Rational) -> Self {
        let conclusion = if f_lo.is_zero() {
            SignConclusion::ExactRootAtLo
        } else if f_hi.is_zero() {
            SignConclusion::ExactRootAtHi
        } else if f_lo.is_negative() != f_hi.is_negative() {
            SignConclusion::SignChange
        } else {
            SignConclusion::NoSignChange
        };
        SignCertificate {
            lo,
            hi,
            f_lo,
            f_hi,
            conclusion,
        }
    }

    /// Re-evaluates `p` at both endpoints and checks the stored values and
    /// conclusion.
    pub fn verify(&self, p: &Polynomial) -> bool {
        self.lo < self.hi
            && p.eval(&self.lo) == self.f_lo
            && p.eval(&self.hi) == self.f_hi
            && Self::from_values(
                self.lo.clone(),
                self.hi.clone(),
                self.f_lo.clone(),
                self.f_hi.clone(),
            )
            .conclusion
                == self.conclusion
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_sign_change(&self) -> bool {
        self.conclusion == SignConclusion::SignChange
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootKind {
    Exact(Rational),
    /// The open interval of the certificate holds exactly one root.
    Bracketed(SignCertificate),
}

/// A real root, either known exactly or bracketed by a sign certificate.
///
/// Certificates are stated for the squarefree part of the polynomial the
/// root was isolated from, so roots of even multiplicity still carry a sign
/// change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub kind: RootKind,
    pub multiplicity: u32,
    /// Cascade level the root was produced on; the input polynomial's level
    /// equals the degree of its squarefree part.
    pub level: usize,
}

impl IsolatedRoot {
    pub fn exact(&self) -> Option<&Rational> {
        match &self.kind {
            RootKind::Exact(x) => Some(x),
            RootKind::Bracketed(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&SignCertificate> {
        match &self.kind {
            RootKind::Exact(_) => None,
            RootKind::Bracketed(c) => Some(c),
        }
    }

    pub fn lo(&self) -> &Rational {
        match &self.kind {
            RootKind::Exact(x) => x,
            RootKind::Bracketed(c) => &c.lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match &self.kind {
            RootKind::Exact(x) => x,
            RootKind::Bracketed(c) => &c.hi,
        }
    }

    /// Whether `x` is the exact root or lies in the open bracket.
    pub fn contains(&self, x: &Rational) -> bool {
        match &self.kind {
            RootKind::Exact(v) => v == x,
            RootKind::Bracketed(c) => &c.lo < x && x < &c.hi,
        }
    }

    /// Midpoint of the bracket, or the exact value.
    pub fn midpoint(&self) -> Rational {
        (self.lo() + self.hi()) / int(2)
    }
}

/// Evaluates `p` exactly at both ends of `[lo, hi]`.
pub fn sign_change(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<SignCertificate> {
    if lo >= hi {
        return Err(Error::EmptyInterval { op: "sign_change" });
    }
    Ok(SignCertificate::from_values(
        lo.clone(),
        hi.clone(),
        p.eval(lo),
        p.eval(hi),
    ))
}

/// Splits a sign-change certificate at an interior probe and keeps the half
/// that still changes sign. A probe that is itself a root yields the
/// certificate on `(lo, probe)` with conclusion `ExactRootAtHi`.
pub fn narrow(p: &Polynomial, cert: &SignCertificate, probe: &Rational) -> Result<SignCertificate> {
    if !cert.is_sign_change() {
        return Err(Error::NoSignChange { op: "narrow" });
    }
    if probe <= &cert.lo || probe >= &cert.hi {
        return Err(Error::ProbeOutside);
    }
    let f_probe = p.eval(probe);
    if f_probe.is_zero() || f_probe.is_negative() != cert.f_lo.is_negative() {
        Ok(SignCertificate::from_values(
            cert.lo.clone(),
            probe.clone(),
            cert.f_lo.clone(),
            f_probe,
        ))
    } else {
        Ok(SignCertificate::from_values(
            probe.clone(),
            cert.hi.clone(),
            f_probe,
            cert.f_hi.clone(),
        ))
    }
}

/// A root of one cascade level: exact, or enclosed in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Located {
    Exact(Rational),
    Enclosed { lo: Rational, hi: Rational },
}

impl Located {
    pub fn lower(&self) -> &Rational {
        match self {
            Located::Exact(x) => x,
            Located::Enclosed { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Located::Exact(x) => x,
            Located::Enclosed { hi, .. } => hi,
        }
    }
}

/// One level of the ascent, kept for transcripts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeLevel {
    /// Degree of the level polynomial (1 for the linear level).
    pub level: usize,
    pub polynomial: Polynomial,
    pub great_hypothesis: Rational,
    /// Distinct positive roots, ascending.
    pub roots: Vec<Located>,
}

/// A polynomial together with its primitive integer form.
struct Level {
    exact: Polynomial,
    ints: IntPoly,
}

impl Level {
    fn new(p: &Polynomial) -> Self {
        Level {
            exact: p.clone(),
            ints: IntPoly::new(p),
        }
    }
}

/// Root with the polynomial whose sign change brackets it.
#[derive(Debug, Clone)]
struct Tracked {
    lo: Rational,
    hi: Rational,
    exact: bool,
    /// Sign of the witness at `lo` (meaningless when exact).
    lo_sign: Ordering,
    /// Chain index of a polynomial that is monotone on `[lo, hi]` and has
    /// opposite signs at the endpoints.
    witness: usize,
}

impl Tracked {
    fn exact(x: Rational, witness: usize) -> Self {
        Tracked {
            lo: x.clone(),
            hi: x,
            exact: true,
            lo_sign: Ordering::Equal,
            witness,
        }
    }

    fn located(&self) -> Located {
        if self.exact {
            Located::Exact(self.lo.clone())
        } else {
            Located::Enclosed {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
            }
        }
    }

    /// One bisection step against the witness.
    fn bisect(&mut self, witness: &IntPoly) {
        debug_assert!(!self.exact);
        let mid = (&self.lo + &self.hi) / int(2);
        match witness.sign_at(&mid) {
            Ordering::Equal => {
                self.lo = mid.clone();
                self.hi = mid;
                self.exact = true;
            }
            s if s == self.lo_sign => self.lo = mid,
            _ => self.hi = mid,
        }
    }

    /// Tests the only candidate `m / lc` that can be a rational root once the
    /// enclosure is narrower than `1 / lc` (any rational root `r` of an
    /// integer polynomial with leading coefficient `lc` has `lc * r`
    /// integral). Narrows to that width first.
    fn detect_rational(&mut self, witness: &IntPoly) {
        let lc = Rational::from_integer(witness.leading().expect("nonzero").abs());
        while !self.exact && (&self.hi - &self.lo) * &lc >= Rational::one() {
            self.bisect(witness);
        }
        if self.exact {
            return;
        }
        let candidate = Rational::from_integer((&self.lo * &lc).floor().to_integer() + 1) / &lc;
        if candidate >= self.hi {
            return;
        }
        match witness.sign_at(&candidate) {
            Ordering::Equal => *self = Tracked::exact(candidate, self.witness),
            s if s == self.lo_sign => self.lo = candidate,
            _ => self.hi = candidate,
        }
    }
}

fn gcd_threshold() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << GCD_FALLBACK_WIDTH_BITS)
}

/// Sign of `poly` at the root tracked by `root`, refining the enclosure in
/// place until it is decided.
fn sign_at_root(poly: &Level, root: &mut Tracked, witness: &Level) -> Ordering {
    let threshold = gcd_threshold();
    let mut shared_checked = false;
    loop {
        if root.exact {
            return poly.ints.sign_at(&root.lo);
        }
        if let Some(s) = poly.ints.certified_sign(&root.lo, &root.hi) {
            return s;
        }
        if !shared_checked && &root.hi - &root.lo < threshold {
            shared_checked = true;
            let g = poly.exact.gcd(&witness.exact);
            if g.degree().is_some_and(|d| d > 0) {
                let g = squarefree_part(&g).expect("nonconstant").part;
                if g.sign_at(&root.lo) != g.sign_at(&root.hi) {
                    return Ordering::Equal;
                }
            }
        }
        root.bisect(&witness.ints);
    }
}

/// Sign of `poly` at an isolated root, where `witness` is the polynomial
/// the root's certificate refers to (the squarefree part of the polynomial
/// it was isolated from). Bracketed roots are refined exactly until the sign
/// is decided; `Equal` means `poly` vanishes at the root.
pub fn sign_at_isolated(poly: &Polynomial, root: &IsolatedRoot, witness: &Polynomial) -> Ordering {
    let mut tracked = match &root.kind {
        RootKind::Exact(x) => Tracked::exact(x.clone(), 0),
        RootKind::Bracketed(c) => Tracked {
            lo: c.lo.clone(),
            hi: c.hi.clone(),
            exact: false,
            lo_sign: c.f_lo.cmp(&Rational::zero()),
            witness: 0,
        },
    };
    sign_at_root(&Level::new(poly), &mut tracked, &Level::new(witness))
}

fn linear_root(p: &Polynomial) -> Rational {
    -p.coeff(0) / p.coeff(1)
}

struct Ascent {
    levels: Vec<Polynomial>,
    reports: Vec<CascadeLevel>,
    roots: Vec<Tracked>,
}

/// Runs the ascent over the chain of a polynomial with positive leading
/// coefficient and returns the positive roots of every level.
fn ascend(p: &Polynomial) -> Result<Ascent> {
    let chain = cascade_chain(p)?;
    let levels = chain.levels;
    let exact_levels: Vec<Level> = levels.iter().map(Level::new).collect();
    let mut reports = Vec::with_capacity(levels.len());

    let base = &levels[0];
    let mut roots = Vec::new();
    let r = linear_root(base);
    if r.is_positive() {
        roots.push(Tracked::exact(r, 0));
    }
    reports.push(CascadeLevel {
        level: 1,
        polynomial: base.clone(),
        great_hypothesis: great_hypothesis(base)?,
        roots: roots.iter().map(Tracked::located).collect(),
    });

    for i in 1..levels.len() {
        let poly = &levels[i];
        let level = &exact_levels[i];
        let great = great_hypothesis(poly)?;

        // (point, sign of poly there); shared roots have sign Equal.
        let mut boundaries: Vec<(Tracked, Ordering)> = Vec::with_capacity(roots.len() + 2);
        let zero = Rational::zero();
        boundaries.push((Tracked::exact(zero.clone(), i), level.ints.sign_at(&zero)));
        for mut r in roots.drain(..) {
            let witness = r.witness;
            let s = sign_at_root(level, &mut r, &exact_levels[witness]);
            boundaries.push((r, s));
        }
        let last_upper = boundaries.last().expect("nonempty").0.hi.clone();
        let top = if great > last_upper { great.clone() } else { last_upper };
        let top_sign = level.ints.sign_at(&top);
        boundaries.push((Tracked::exact(top, i), top_sign));

        let mut found = Vec::new();
        for (k, pair) in boundaries.windows(2).enumerate() {
            let (left, left_sign) = &pair[0];
            let (right, right_sign) = &pair[1];
            if k > 0 && *left_sign == Ordering::Equal {
                found.push(left.clone());
            }
            if *left_sign == Ordering::Equal || *right_sign == Ordering::Equal {
                continue;
            }
            if left_sign == right_sign || left.hi >= right.lo {
                continue;
            }
            let mut root = Tracked {
                lo: left.hi.clone(),
                hi: right.lo.clone(),
                exact: false,
                lo_sign: *left_sign,
                witness: i,
            };
            root.detect_rational(&level.ints);
            found.push(root);
        }

        reports.push(CascadeLevel {
            level: i + 1,
            polynomial: poly.clone(),
            great_hypothesis: great,
            roots: found.iter().map(Tracked::located).collect(),
        });
        roots = found;
    }
    Ok(Ascent {
        levels,
        reports,
        roots,
    })
}

/// The full ascent over the squarefree part of `p`, level by level.
pub fn cascade_ascent(p: &Polynomial) -> Result<Vec<CascadeLevel>> {
    let sf = squarefree_part(p)?;
    Ok(ascend(&sf.part)?.reports)
}

fn positive_roots_of(sf: &SquarefreeDecomposition) -> Result<Vec<IsolatedRoot>> {
    let ascent = ascend(&sf.part)?;
    let top_level = ascent.levels.len();
    let top = ascent.levels.last().expect("nonempty");
    let mut out = Vec::with_capacity(ascent.roots.len());
    for r in ascent.roots {
        let root = if r.exact {
            let multiplicity = sf.multiplicity_at(&r.lo).unwrap_or(1);
            IsolatedRoot {
                kind: RootKind::Exact(r.lo),
                multiplicity,
                level: top_level,
            }
        } else {
            let multiplicity = sf.multiplicity_in(&r.lo, &r.hi).unwrap_or(1);
            let cert = sign_change(top, &r.lo, &r.hi)?;
            debug_assert!(cert.is_sign_change());
            IsolatedRoot {
                kind: RootKind::Bracketed(cert),
                multiplicity,
                level: top_level,
            }
        };
        out.push(root);
    }
    Ok(out)
}

/// Positive real roots of `p`, ascending, with multiplicities.
///
/// Every bracketed root's certificate refers to the squarefree part of `p`
/// (see [`squarefree_part`]) and its open interval holds exactly one root.
pub fn isolate_positive_roots(p: &Polynomial) -> Result<Vec<IsolatedRoot>> {
    p.require_degree("isolate_positive_roots", 1)?;
    positive_roots_of(&squarefree_part(p)?)
}

fn reflect_decomposition(sf: &SquarefreeDecomposition) -> SquarefreeDecomposition {
    let flip = |q: &Polynomial| q.reflect().expect("nonzero").monic();
    SquarefreeDecomposition {
        part: flip(&sf.part),
        factors: sf.factors.iter().map(|(f, m)| (flip(f), *m)).collect(),
    }
}

/// All real roots of `p`, ascending: the positive ones, the negated positive
/// roots of `p(-x)`, and zero with its multiplicity.
pub fn isolate_all_roots(p: &Polynomial) -> Result<Vec<IsolatedRoot>> {
    p.require_degree("isolate_all_roots", 1)?;
    let sf = squarefree_part(p)?;
    let mut out = Vec::new();

    let reflected = positive_roots_of(&reflect_decomposition(&sf))?;
    for r in reflected.into_iter().rev() {
        let kind = match r.kind {
            RootKind::Exact(x) => RootKind::Exact(-x),
            RootKind::Bracketed(c) => RootKind::Bracketed(sign_change(&sf.part, &-c.hi, &-c.lo)?),
        };
        out.push(IsolatedRoot { kind, ..r });
    }

    if let Some(k) = p.coeffs().iter().position(|c| !c.is_zero()) {
        if k > 0 {
            out.push(IsolatedRoot {
                kind: RootKind::Exact(Rational::zero()),
                multiplicity: k as u32,
                level: sf.part.degree().unwrap_or(0),
            });
        }
    }

    out.extend(positive_roots_of(&sf)?);
    Ok(out)
}

/// Roots of `p` in an open interval, plus roots sitting exactly on its ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRoots {
    pub roots: Vec<IsolatedRoot>,
    /// Exact roots equal to `lo` or `hi`; excluded from `roots` because the
    /// interval is open.
    pub boundary_roots: Vec<Rational>,
}

/// Real roots of `p` inside the open interval `(lo, hi)`. Brackets that
/// straddle an endpoint are narrowed at that endpoint.
pub fn isolate_in_interval(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<IntervalRoots> {
    if lo >= hi {
        return Err(Error::EmptyInterval {
            op: "isolate_in_interval",
        });
    }
    let sqf = squarefree_part(p)?.part;
    let mut roots = Vec::new();
    let mut boundary_roots = Vec::new();
    for root in isolate_all_roots(p)? {
        let mut kind = root.kind.clone();
        for end in [lo, hi] {
            if let RootKind::Bracketed(c) = &kind {
                if &c.lo < end && end < &c.hi {
                    let n = narrow(&sqf, c, end)?;
                    kind = match n.conclusion {
                        SignConclusion::ExactRootAtHi => RootKind::Exact(n.hi),
                        _ => RootKind::Bracketed(n),
                    };
                }
            }
        }
        match &kind {
            RootKind::Exact(x) if x == lo || x == hi => boundary_roots.push(x.clone()),
            RootKind::Exact(x) if lo < x && x < hi => roots.push(IsolatedRoot { kind, ..root }),
            RootKind::Bracketed(c) if lo <= &c.lo && &c.hi <= hi => {
                roots.push(IsolatedRoot { kind, ..root })
            }
            _ => {}
        }
    }
    Ok(IntervalRoots {
        roots,
        boundary_roots,
    })
}
