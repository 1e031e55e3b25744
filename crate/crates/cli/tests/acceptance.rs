//! Acceptance run: eight end-to-end criteria, one PASS/FAIL line each.
//!
//! Built with `harness = false`, so the lines are printed on every run; the
//! process fails if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cascades_cli::parse::parse_polynomial;
use cascades_cli::{run, REPORT_SCHEMA};
use cascades_core::bounds::great_hypothesis;
use cascades_core::certify::{check_derivative_sign_flip, check_interleaving, grid_scan_oracle};
use cascades_core::isolate::{isolate_all_roots, sign_change};
use cascades_core::poly::{cascade_chain, squarefree_part};
use cascades_core::refine::{bisect, false_position, newton_refine, Outcome, RefineOptions};
use cascades_core::{int, rat, IsolatedRoot, Polynomial, Rational, SignCertificate};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tol_1e(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(k))
}

fn quartic() -> Polynomial {
    Polynomial::from_ints(&[473, -648, 198, -24, 1])
}

/// Distinct rational roots with small denominators, sorted.
fn random_roots(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut roots: Vec<Rational> = Vec::new();
    while roots.len() < count {
        let r = rat(rng.gen_range(-40..=40), rng.gen_range(1..=6));
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots.sort();
    roots
}

/// Bracketed irrational roots: `(x^2 - n)` times a random rational factor,
/// stated for the squarefree part.
fn random_brackets(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Polynomial, SignCertificate)> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=60);
        let q = Polynomial::from_ints(&[-n, 0, 1]);
        let extra = Polynomial::linear_factor(&rat(rng.gen_range(-30..=30), rng.gen_range(1..=4)));
        let p = &q * &extra;
        let sf = squarefree_part(&p).unwrap().part;
        for root in isolate_all_roots(&p).unwrap() {
            if let Some(c) = root.certificate() {
                out.push((sf.clone(), c.clone()));
            }
        }
    }
    out.truncate(count);
    out
}

fn replay_values() -> Verdict {
    let start = Instant::now();
    let e = run(["cascades", "--json", "replay"]);
    let elapsed = start.elapsed();
    ensure(e.code == 0, || format!("replay exited {}: {}", e.code, e.stdout))?;
    let v: Value = serde_json::from_str(&e.stdout).map_err(|err| err.to_string())?;
    let results = &v["results"];
    ensure(results["matched"] == true, || format!("mismatches: {}", results["mismatches"]))?;

    // Independently of the replay transcript: great hypotheses and signs.
    let chain = cascade_chain(&quartic()).map_err(|err| err.to_string())?;
    let greats: Vec<Rational> = [4, 2, 3]
        .iter()
        .map(|&l| great_hypothesis(&chain.levels[l - 1]).unwrap())
        .collect();
    ensure(greats == [int(649), int(13), int(163)], || format!("great hypotheses {greats:?}"))?;
    let printed: [&[i64]; 4] = [&[-24, 4], &[198, -72, 6], &[-648, 396, -72, 4], &[473, -648, 198, -24, 1]];
    for (ours, theirs) in chain.levels.iter().zip(printed) {
        let theirs = Polynomial::from_ints(theirs);
        ensure(ours.monic() == theirs.monic(), || format!("cascade {ours} vs {theirs}"))?;
        let table: &[(i64, i64)] = match theirs.degree() {
            Some(2) => &[(5, -12), (4, 6)],
            Some(3) => &[(0, -648), (5, 32), (4, 40), (3, 0)],
            Some(4) => &[(0, 473), (3, -256), (1, 0)],
            _ => &[],
        };
        for &(at, value) in table {
            ensure(theirs.eval(&int(at)) == int(value), || format!("{theirs} at {at}"))?;
        }
    }
    let roots = isolate_all_roots(&quartic()).map_err(|err| err.to_string())?;
    let exact: Vec<Option<&Rational>> = roots.iter().map(IsolatedRoot::exact).collect();
    ensure(exact == [Some(&int(1)), Some(&int(11))], || format!("roots {exact:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("all checks matched in {elapsed:.2?}"))
}

fn six_minus_root_three() -> Verdict {
    let f2 = Polynomial::from_ints(&[198, -72, 6]);
    let cert = sign_change(&f2, &int(4), &int(5)).map_err(|e| e.to_string())?;
    let a = bisect(&f2, &cert, &tol_1e(12), &RefineOptions::default()).map_err(|e| e.to_string())?;
    // 6 - sqrt(3) to 40 digits from an integer square root: s <= sqrt(3) * 10^40 < s + 1
    let scale = BigInt::from(10).pow(40);
    let s = (BigInt::from(3) * &scale * &scale).sqrt();
    let ref_hi = int(6) - Rational::new(s.clone(), scale.clone());
    let ref_lo = int(6) - Rational::new(s + 1, scale);
    let err = [(&a.midpoint() - &ref_lo).abs(), (&a.midpoint() - &ref_hi).abs()]
        .into_iter()
        .max()
        .unwrap();
    ensure(err <= tol_1e(12), || format!("midpoint off by {err}"))?;
    ensure(a.lo <= ref_lo && ref_hi <= a.hi, || "reference not enclosed".into())?;
    ensure(a.iterations <= 45, || format!("{} steps", a.iterations))?;
    ensure(
        a.width() == Rational::new(BigInt::one(), BigInt::one() << a.iterations),
        || "width law".into(),
    )?;
    Ok(format!("{} bisection steps, |mid - ref| <= 1e-12", a.iterations))
}

fn interleaving_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let count = rng.gen_range(3..=7);
        let p = Polynomial::from_roots(&random_roots(&mut rng, count));
        let report = check_interleaving(&p).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), || format!("{p}: {:?}", report.violations))?;
        ensure(report.gaps.len() == count - 1, || format!("{p}: {} gaps", report.gaps.len()))?;
    }
    let report = check_interleaving(&quartic()).map_err(|e| e.to_string())?;
    let dp: Vec<Option<&Rational>> = report.dp_roots.iter().map(IsolatedRoot::exact).collect();
    ensure(dp == [Some(&int(3)), Some(&int(6)), Some(&int(9))], || format!("{dp:?}"))?;
    ensure(
        report.gaps.len() == 1 && report.gaps[0].count == 3,
        || format!("{:?}", report.gaps),
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("1000 polynomials, 0 violations, quartic gap 3 at {{3, 6, 9}}, {elapsed:.2?}"))
}

/// Strict Cauchy bound `1 + max |a_i / a_n|`, rounded up.
fn cauchy_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().unwrap().abs();
    let m = p.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap();
    (m + int(1)).ceil()
}

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut total_roots = 0;
    let mut max_steps = 0;
    for _ in 0..500 {
        let degree = rng.gen_range(1..=6);
        let mut coeffs: Vec<i64> = (0..degree).map(|_| rng.gen_range(-100..=100)).collect();
        let mut lead = 0;
        while lead == 0 {
            lead = rng.gen_range(-100..=100);
        }
        coeffs.push(lead);
        let p = Polynomial::from_ints(&coeffs);
        let sf = squarefree_part(&p).map_err(|e| e.to_string())?.part;
        let found = isolate_all_roots(&p).map_err(|e| e.to_string())?;

        // Shrink every bracket to width 2^-24, then take the smallest gap
        // between consecutive enclosures as the measured separation.
        let opts = RefineOptions::default();
        let fine = Rational::new(BigInt::one(), BigInt::one() << 24u32);
        let mut spans: Vec<(Rational, Rational)> = Vec::new();
        for root in &found {
            match root.certificate() {
                None => {
                    let x = root.exact().unwrap().clone();
                    spans.push((x.clone(), x));
                }
                Some(c) => {
                    let a = bisect(&sf, c, &fine, &opts).map_err(|e| e.to_string())?;
                    spans.push((a.lo, a.hi));
                }
            }
        }
        let bound = cauchy_bound(&p);
        let (lo, hi) = (-bound.clone(), bound);
        let separation = spans
            .windows(2)
            .map(|w| &w[1].0 - &w[0].1)
            .min()
            .unwrap_or_else(|| &hi - &lo);
        ensure(separation.is_positive(), || format!("{p}: overlapping enclosures"))?;
        let cells = ((&hi - &lo) * int(4) / &separation).ceil().to_integer();
        let steps = usize::try_from(cells).unwrap().max(4096);
        max_steps = max_steps.max(steps);
        let oracle = grid_scan_oracle(&sf, &lo, &hi, steps);

        ensure(oracle.len() == found.len(), || {
            format!("{p}: oracle {} roots, isolation {}", oracle.len(), found.len())
        })?;
        for (cell, root) in oracle.iter().zip(&found) {
            let contained = match root.exact() {
                Some(x) => &cell.lo <= x && x <= &cell.hi,
                None => {
                    // both intervals share a sign change of the squarefree part
                    let a = (&cell.lo).max(root.lo());
                    let b = (&cell.hi).min(root.hi());
                    a < b && sf.eval(a) * sf.eval(b) <= Rational::zero()
                }
            };
            ensure(contained, || format!("{p}: cell [{}, {}] misses root", cell.lo, cell.hi))?;
        }
        total_roots += found.len();
    }
    Ok(format!("500 polynomials, {total_roots} roots agree (finest grid {max_steps} cells)"))
}

fn width_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let opts = RefineOptions {
        detect_rational: false,
        ..RefineOptions::default()
    };
    let cases = random_brackets(&mut rng, 100);
    for (i, (p, cert)) in cases.iter().enumerate() {
        // every k once across the first 64 certificates, then random k
        let k = if i < 64 { i as u32 + 1 } else { rng.gen_range(1..=64) };
        let target = cert.width() / Rational::from_integer(BigInt::one() << k);
        let a = bisect(p, cert, &target, &opts).map_err(|e| e.to_string())?;
        ensure(a.outcome == Outcome::Converged && a.iterations == k as usize, || {
            format!("{p}: k = {k}, {} iterations", a.iterations)
        })?;
        ensure(a.width() == target, || format!("{p}: k = {k}, width {}", a.width()))?;
    }
    Ok("100 certificates, width = w0 / 2^k exactly for k in 1..=64".into())
}

fn derivative_sign_flips() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut pairs = 0;
    for _ in 0..300 {
        let count = rng.gen_range(2..=6);
        let mut p = Polynomial::from_roots(&random_roots(&mut rng, count));
        if rng.gen_bool(0.5) {
            let n = [2, 3, 5, 7, 11][rng.gen_range(0..5)];
            p = &p * &Polynomial::from_ints(&[-n, 0, 1]);
        }
        let roots = isolate_all_roots(&p).map_err(|e| e.to_string())?;
        for w in roots.windows(2) {
            let flips = check_derivative_sign_flip(&p, &w[0], &w[1]).map_err(|e| e.to_string())?;
            ensure(flips, || format!("{p}: no flip between {} and {}", w[0].lo(), w[1].lo()))?;
            pairs += 1;
        }
    }
    let dq = quartic().derivative().map_err(|e| e.to_string())?;
    ensure(dq.eval(&int(1)) == int(-320) && dq.eval(&int(11)) == int(320), || {
        "quartic derivative values".into()
    })?;
    let roots = isolate_all_roots(&quartic()).map_err(|e| e.to_string())?;
    ensure(
        check_derivative_sign_flip(&quartic(), &roots[0], &roots[1]).map_err(|e| e.to_string())?,
        || "quartic flip".into(),
    )?;
    Ok(format!("{pairs} adjacent pairs flip; p'(1) = -320, p'(11) = 320"))
}

fn method_agreement() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let tol = tol_1e(20);
    let two_tol = &tol * int(2);
    let opts = RefineOptions::default();
    let cases = random_brackets(&mut rng, 100);
    let mut newton_faster = 0;
    for (p, cert) in &cases {
        let b = bisect(p, cert, &tol, &opts).map_err(|e| e.to_string())?;
        let f = false_position(p, cert, &tol, 1000, &opts).map_err(|e| e.to_string())?;
        let n = newton_refine(p, &cert.midpoint(), &tol, 1000, Some(cert), &opts).map_err(|e| e.to_string())?;
        for a in [&b, &f, &n] {
            ensure(matches!(a.outcome, Outcome::Converged | Outcome::ExactRoot(_)), || {
                format!("{p}: {:?} {:?}", a.method, a.outcome)
            })?;
        }
        ensure((b.midpoint() - f.midpoint()).abs() <= two_tol, || format!("{p}: false position"))?;
        ensure((b.midpoint() - n.midpoint()).abs() <= two_tol, || format!("{p}: newton"))?;
        if n.iterations < b.iterations {
            newton_faster += 1;
        }
    }
    ensure(newton_faster * 10 >= cases.len() * 9, || {
        format!("newton faster in {newton_faster}/{}", cases.len())
    })?;
    Ok(format!("100 brackets agree within 2e-20; newton faster in {newton_faster}/100"))
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial {
    let degree = rng.gen_range(0..=8);
    let coeffs = (0..=degree)
        .map(|_| {
            if rng.gen_bool(0.3) {
                Rational::zero()
            } else {
                rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=12))
            }
        })
        .collect();
    Polynomial::new(coeffs)
}

fn cli_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    let mut polys = Vec::new();
    for _ in 0..1000 {
        let p = random_polynomial(&mut rng);
        let text = p.to_string();
        let back = parse_polynomial(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == p, || format!("{text} parsed as {back}"))?;
        ensure(back.to_string() == text, || format!("{text} re-rendered as {back}"))?;
        polys.push(text);
    }

    let schema: Value = serde_json::from_str(REPORT_SCHEMA).map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let quartic = quartic().to_string();
    let mut runs: Vec<Vec<String>> = [
        vec!["replay"],
        vec!["bounds", &quartic],
        vec!["cascades", &quartic],
        vec!["isolate", &quartic, "--positive-only"],
        vec!["certify", &quartic],
        vec!["refine", "x^2 - 2", "--interval", "1,2", "--method", "newton", "--trace"],
        vec!["refine", "x^2 - 2", "--interval", "1,2", "--method", "falsepos"],
        vec!["compare", "x^3 - 2", "--interval", "1,2", "--tol", "1e-20"],
        vec!["isolate", "x^^2"],
        vec!["isolate", "5"],
        vec!["refine", "x^2 + 1", "--interval", "0,1"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect();
    for text in polys.iter().filter(|t| t.contains('x')).take(25) {
        for command in ["bounds", "cascades", "isolate", "certify"] {
            runs.push(vec![command.to_string(), text.clone()]);
        }
    }
    for args in &runs {
        let e = run(["cascades", "--json"].into_iter().map(String::from).chain(args.iter().cloned()));
        let v: Value = serde_json::from_str(&e.stdout).map_err(|err| format!("{args:?}: {err}"))?;
        let errors: Vec<String> = validator.iter_errors(&v).map(|err| err.to_string()).collect();
        ensure(errors.is_empty(), || format!("{args:?}: {errors:?}"))?;
    }
    Ok(format!("1000 round-trips; {} JSON reports schema-valid", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("replay of the worked quartic", replay_values),
        ("6 - sqrt(3) by bisection", six_minus_root_three),
        ("interleaving suite", interleaving_suite),
        ("grid oracle equivalence", oracle_equivalence),
        ("bisection width identity", width_identity),
        ("derivative sign flips", derivative_sign_flips),
        ("method agreement", method_agreement),
        ("CLI round-trip and schema", cli_round_trip),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
