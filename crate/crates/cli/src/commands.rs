//! One function per subcommand. Each returns the JSON payload and the text
//! rendering of the same information.

use std::fmt::Write as _;

use cascades_core::bounds::root_bounds;
use cascades_core::certify::{check_derivative_sign_flip, check_interleaving};
use cascades_core::isolate::{
    cascade_ascent, isolate_all_roots, isolate_positive_roots, sign_change, Located,
};
use cascades_core::poly::{cascade_chain, squarefree_part};
use cascades_core::refine::{
    bisect, false_position, newton_refine, Method, Outcome, RefineOptions, RootApproximation,
};
use cascades_core::{Error, IsolatedRoot, Polynomial, Rational, RootKind, SignConclusion};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::render::{interval_json, rational_json, render_enclosure, render_rational};
use crate::report::{CommandError, CommandOutput, ExitStatus};

type CommandResult = Result<CommandOutput, CommandError>;

fn ok(results: Value, text: String) -> CommandResult {
    Ok(CommandOutput {
        results,
        text,
        status: ExitStatus::Success,
    })
}

fn optional_rational(r: Option<&Rational>, digits: usize) -> Value {
    r.map_or(Value::Null, |r| rational_json(r, digits))
}

pub fn bounds(p: &Polynomial, digits: usize) -> CommandResult {
    let b = root_bounds(p)?;
    let flags: Vec<&str> = b.flags.iter().map(|f| f.as_str()).collect();
    let results = json!({
        "small": rational_json(&b.small, digits),
        "great": rational_json(&b.great, digits),
        "newton": optional_rational(b.newton.as_ref(), digits),
        "sum_of_squares": optional_rational(b.sum_of_squares.as_ref(), digits),
        "flags": flags,
    });
    let mut text = String::new();
    writeln!(text, "small hypothesis = {}", render_rational(&b.small, digits)).unwrap();
    writeln!(text, "great hypothesis = {}", render_rational(&b.great, digits)).unwrap();
    match (&b.newton, &b.sum_of_squares) {
        (Some(n), Some(s)) => {
            writeln!(text, "sum of squared roots = {}", render_rational(s, digits)).unwrap();
            writeln!(text, "newton bound = {}", render_rational(n, digits)).unwrap();
        }
        _ => writeln!(text, "newton bound = undefined for a linear polynomial").unwrap(),
    }
    if !flags.is_empty() {
        writeln!(text, "flags: {}", flags.join(", ")).unwrap();
    }
    ok(results, text)
}

pub fn located_json(l: &Located, digits: usize) -> Value {
    match l {
        Located::Exact(x) => json!({ "kind": "exact", "value": rational_json(x, digits) }),
        Located::Enclosed { lo, hi } => json!({
            "kind": "enclosed",
            "interval": interval_json(lo, hi, digits),
        }),
    }
}

fn located_text(l: &Located, digits: usize) -> String {
    match l {
        Located::Exact(x) => format!("Exact {}", render_rational(x, digits)),
        Located::Enclosed { lo, hi } => {
            format!("in ({lo}, {hi}) {}", render_enclosure(lo, hi, digits))
        }
    }
}

pub fn cascades(p: &Polynomial, digits: usize) -> CommandResult {
    let chain = cascade_chain(p)?;
    let ascent = cascade_ascent(p)?;
    let sqf = squarefree_part(p)?.part;
    let mut text = String::new();
    writeln!(text, "cascade chain ({} levels)", chain.len()).unwrap();
    let mut chain_json = Vec::new();
    for (i, (level, scaling)) in chain.levels.iter().zip(&chain.scalings).enumerate() {
        writeln!(text, "  level {}: {level}    (scaling {scaling})", i + 1).unwrap();
        chain_json.push(json!({
            "level": i + 1,
            "polynomial": level.to_string(),
            "coefficients": level.coeffs().iter().map(|c| rational_json(c, digits)).collect::<Vec<_>>(),
            "scaling": rational_json(scaling, digits),
        }));
    }
    if sqf != p.monic() {
        writeln!(text, "ascent runs on the squarefree part {sqf}").unwrap();
    }
    writeln!(text, "ascent").unwrap();
    let mut ascent_json = Vec::new();
    for level in &ascent {
        writeln!(
            text,
            "  level {}: {}    great hypothesis {}",
            level.level, level.polynomial, level.great_hypothesis
        )
        .unwrap();
        for r in &level.roots {
            writeln!(text, "    root {}", located_text(r, digits)).unwrap();
        }
        ascent_json.push(json!({
            "level": level.level,
            "polynomial": level.polynomial.to_string(),
            "great_hypothesis": rational_json(&level.great_hypothesis, digits),
            "positive_roots": level.roots.iter().map(|r| located_json(r, digits)).collect::<Vec<_>>(),
        }));
    }
    let results = json!({
        "chain": chain_json,
        "squarefree_part": sqf.to_string(),
        "ascent": ascent_json,
    });
    ok(results, text)
}

pub fn root_json(root: &IsolatedRoot, digits: usize) -> Value {
    match &root.kind {
        RootKind::Exact(x) => json!({
            "kind": "exact",
            "value": rational_json(x, digits),
            "multiplicity": root.multiplicity,
            "level": root.level,
        }),
        RootKind::Bracketed(c) => json!({
            "kind": "bracketed",
            "interval": interval_json(&c.lo, &c.hi, digits),
            "f_lo": rational_json(&c.f_lo, digits),
            "f_hi": rational_json(&c.f_hi, digits),
            "conclusion": c.conclusion.as_str(),
            "multiplicity": root.multiplicity,
            "level": root.level,
        }),
    }
}

pub fn root_text(root: &IsolatedRoot, digits: usize) -> String {
    let body = match &root.kind {
        RootKind::Exact(x) => format!("Exact {}", render_rational(x, digits)),
        RootKind::Bracketed(c) => format!(
            "in ({}, {})  {}",
            c.lo,
            c.hi,
            render_enclosure(&c.lo, &c.hi, digits)
        ),
    };
    if root.multiplicity > 1 {
        format!("{body}  (multiplicity {})", root.multiplicity)
    } else {
        body
    }
}

pub fn isolate(p: &Polynomial, positive_only: bool, digits: usize) -> CommandResult {
    let roots = if positive_only {
        isolate_positive_roots(p)?
    } else {
        isolate_all_roots(p)?
    };
    let sqf = squarefree_part(p)?.part;
    let which = if positive_only { "positive real" } else { "real" };
    let mut text = format!("{} distinct {which} root(s)\n", roots.len());
    for r in &roots {
        writeln!(text, "  {}", root_text(r, digits)).unwrap();
    }
    if roots.iter().any(|r| r.certificate().is_some()) {
        writeln!(text, "certificates refer to the squarefree part {sqf}").unwrap();
    }
    let results = json!({
        "positive_only": positive_only,
        "squarefree_part": sqf.to_string(),
        "roots": roots.iter().map(|r| root_json(r, digits)).collect::<Vec<_>>(),
    });
    ok(results, text)
}

/// The three refinement methods offered on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Bisect,
    Falsepos,
    Newton,
}

#[derive(Debug, Clone)]
pub struct RefineRequest {
    pub lo: Rational,
    pub hi: Rational,
    pub tol: Rational,
    pub max_iter: usize,
    pub trace: bool,
}

fn outcome_str(o: &Outcome) -> &'static str {
    match o {
        Outcome::Converged => "converged",
        Outcome::ExactRoot(_) => "exact_root",
        Outcome::IterationLimit => "iteration_limit",
    }
}

pub fn approximation_json(a: &RootApproximation, digits: usize) -> Value {
    let exact = match &a.outcome {
        Outcome::ExactRoot(r) => rational_json(r, digits),
        _ => Value::Null,
    };
    let trace = a.trace.as_ref().map_or(Value::Null, |steps| {
        steps
            .iter()
            .map(|s| {
                json!({
                    "kind": s.kind.as_str(),
                    "point": rational_json(&s.point, digits),
                    "enclosure": s.enclosure.as_ref().map_or(Value::Null, |(lo, hi)| interval_json(lo, hi, digits)),
                })
            })
            .collect()
    });
    json!({
        "method": a.method.as_str(),
        "outcome": outcome_str(&a.outcome),
        "iterations": a.iterations,
        "enclosure": interval_json(&a.lo, &a.hi, digits),
        "midpoint": rational_json(&a.midpoint(), digits),
        "width": rational_json(&a.width(), digits),
        "exact": exact,
        "trace": trace,
    })
}

fn approximation_text(a: &RootApproximation, digits: usize) -> String {
    let value = match &a.outcome {
        Outcome::ExactRoot(r) => format!("Exact {}", render_rational(r, digits)),
        _ => render_enclosure(&a.lo, &a.hi, digits),
    };
    format!(
        "{:<19} {:>5} iterations  {:<15} {value}",
        a.method.as_str(),
        a.iterations,
        outcome_str(&a.outcome)
    )
}

/// Runs one method on a certified bracket of the squarefree part. An
/// endpoint that is already a root is reported as exact without iterating.
fn run_method(
    sqf: &Polynomial,
    method: MethodArg,
    req: &RefineRequest,
) -> Result<RootApproximation, CommandError> {
    let cert = sign_change(sqf, &req.lo, &req.hi)?;
    let endpoint = match cert.conclusion {
        SignConclusion::ExactRootAtLo => Some(cert.lo.clone()),
        SignConclusion::ExactRootAtHi => Some(cert.hi.clone()),
        SignConclusion::NoSignChange => return Err(Error::NoSignChange { op: "refine" }.into()),
        SignConclusion::SignChange => None,
    };
    let as_method = match method {
        MethodArg::Bisect => Method::Bisection,
        MethodArg::Falsepos => Method::FalsePosition,
        MethodArg::Newton => Method::NewtonSafeguarded,
    };
    if let Some(x) = endpoint {
        return Ok(RootApproximation {
            lo: x.clone(),
            hi: x.clone(),
            iterations: 0,
            method: as_method,
            outcome: Outcome::ExactRoot(x),
            trace: req.trace.then(Vec::new),
        });
    }
    let opts = RefineOptions {
        trace: req.trace,
        ..RefineOptions::default()
    };
    let a = match method {
        MethodArg::Bisect => bisect(sqf, &cert, &req.tol, &opts)?,
        MethodArg::Falsepos => false_position(sqf, &cert, &req.tol, req.max_iter, &opts)?,
        MethodArg::Newton => newton_refine(sqf, &cert.midpoint(), &req.tol, req.max_iter, Some(&cert), &opts)?,
    };
    Ok(a)
}

fn check_request(req: &RefineRequest) -> Result<(), CommandError> {
    if !req.tol.is_positive() {
        return Err(Error::NonPositiveTolerance.into());
    }
    if req.max_iter == 0 {
        return Err(Error::ZeroIterationLimit.into());
    }
    Ok(())
}

pub fn refine(p: &Polynomial, method: MethodArg, req: &RefineRequest, digits: usize) -> CommandResult {
    check_request(req)?;
    let sqf = squarefree_part(p)?.part;
    let a = run_method(&sqf, method, req)?;
    let mut text = format!(
        "refining on ({}, {}) to width <= {}\n{}\n",
        req.lo,
        req.hi,
        req.tol,
        approximation_text(&a, digits)
    );
    if let Some(steps) = &a.trace {
        for (k, s) in steps.iter().enumerate() {
            let enclosure = s
                .enclosure
                .as_ref()
                .map_or(String::new(), |(lo, hi)| format!("  -> {}", render_enclosure(lo, hi, digits)));
            writeln!(text, "  {:>4} {:<19} {}{enclosure}", k + 1, s.kind.as_str(), render_rational(&s.point, digits)).unwrap();
        }
    }
    let mut results = approximation_json(&a, digits);
    results["interval"] = interval_json(&req.lo, &req.hi, digits);
    results["tol"] = rational_json(&req.tol, digits);
    ok(results, text)
}

pub fn compare(p: &Polynomial, req: &RefineRequest, digits: usize) -> CommandResult {
    check_request(req)?;
    let sqf = squarefree_part(p)?.part;
    let runs: Vec<RootApproximation> = [MethodArg::Bisect, MethodArg::Falsepos, MethodArg::Newton]
        .into_iter()
        .map(|m| run_method(&sqf, m, req))
        .collect::<Result<_, _>>()?;
    let two_tol = &req.tol * Rational::from_integer(2.into());
    let agree = runs.iter().all(|a| {
        runs.iter()
            .all(|b| (a.midpoint() - b.midpoint()).abs() <= two_tol)
    });
    let mut text = format!("comparing methods on ({}, {}) with tol {}\n", req.lo, req.hi, req.tol);
    for a in &runs {
        writeln!(text, "  {}", approximation_text(a, digits)).unwrap();
    }
    writeln!(text, "agreement within 2*tol: {}", if agree { "yes" } else { "NO" }).unwrap();
    let results = json!({
        "interval": interval_json(&req.lo, &req.hi, digits),
        "tol": rational_json(&req.tol, digits),
        "methods": runs.iter().map(|a| approximation_json(a, digits)).collect::<Vec<_>>(),
        "agree": agree,
    });
    Ok(CommandOutput {
        results,
        text,
        status: if agree { ExitStatus::Success } else { ExitStatus::Mismatch },
    })
}

pub fn certify(p: &Polynomial, digits: usize) -> CommandResult {
    let report = check_interleaving(p)?;
    let sqf = squarefree_part(p)?.part;
    let roots = isolate_all_roots(p)?;
    let certificates_verified = roots
        .iter()
        .filter_map(IsolatedRoot::certificate)
        .all(|c| c.verify(&sqf) && c.is_sign_change());

    let mut flips = Vec::new();
    let mut text = String::new();
    writeln!(text, "{} real root(s), {} derivative root(s)", report.p_roots.len(), report.dp_roots.len()).unwrap();
    for (i, pair) in roots.windows(2).enumerate() {
        if pair[0].multiplicity != 1 || pair[1].multiplicity != 1 {
            continue;
        }
        let flip = check_derivative_sign_flip(p, &pair[0], &pair[1])?;
        writeln!(text, "  roots {i} and {}: derivative changes sign: {}", i + 1, if flip { "yes" } else { "NO" }).unwrap();
        flips.push(json!({ "left": i, "right": i + 1, "flips": flip }));
    }
    for g in &report.gaps {
        writeln!(
            text,
            "  between roots {} and {}: {} derivative root(s) with multiplicity",
            g.left, g.right, g.count
        )
        .unwrap();
    }
    writeln!(text, "  derivative roots below the least root: {}, above the greatest: {}", report.below, report.above).unwrap();
    writeln!(text, "certificates verified: {}", if certificates_verified { "yes" } else { "NO" }).unwrap();
    for v in &report.violations {
        writeln!(text, "violation: {v}").unwrap();
    }
    let valid = report.is_valid()
        && certificates_verified
        && flips.iter().all(|f| f["flips"] == json!(true));
    writeln!(text, "{}", if valid { "all checks passed" } else { "CHECKS FAILED" }).unwrap();

    let results = json!({
        "roots": report.p_roots.iter().map(|r| root_json(r, digits)).collect::<Vec<_>>(),
        "derivative_roots": report.dp_roots.iter().map(|r| root_json(r, digits)).collect::<Vec<_>>(),
        "gaps": report.gaps.iter().map(|g| json!({
            "left": g.left,
            "right": g.right,
            "count": g.count,
            "distinct": g.distinct,
        })).collect::<Vec<_>>(),
        "below": report.below,
        "above": report.above,
        "violations": report.violations,
        "certificates_verified": certificates_verified,
        "sign_flips": flips,
        "valid": valid,
    });
    Ok(CommandOutput {
        results,
        text,
        status: if valid { ExitStatus::Success } else { ExitStatus::Mismatch },
    })
}
