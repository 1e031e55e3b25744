//! Exact real-root isolation for univariate polynomials with rational
//! coefficients, following Rolle's method of cascades.
//!
//! A polynomial is differentiated repeatedly down to a linear equation; the
//! roots of each derived equation then split the positive half-line into
//! intervals on which the next equation up is monotone, so a sign change at
//! the ends of such an interval isolates exactly one root. All arithmetic is
//! exact, so every reported interval carries a re-checkable sign certificate.
//!
//! Modules:
//! - [`poly`]: rationals, polynomials and the derived-polynomial operators.
//! - [`bounds`]: a-priori root bounds (great/small hypotheses, Newton's bound).
//! - [`isolate`]: sign certificates and the cascade ascent.
//! - [`refine`]: bisection, false position and Newton's tangent method.
//! - [`certify`]: interleaving checks and an independent grid-scan oracle.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod isolate;
pub mod poly;
pub mod refine;

pub use error::{Error, Result};
pub use isolate::{IsolatedRoot, RootKind, SignCertificate, SignConclusion};
pub use poly::{int, rat, CascadeChain, Polynomial, Rational};
