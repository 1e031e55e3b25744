use cascades_core::isolate::{isolate_all_roots, sign_change};
use cascades_core::poly::squarefree_part;
use cascades_core::refine::{bisect, false_position, newton_refine, Outcome, RefineOptions};
use cascades_core::{int, rat, Polynomial, Rational, SignCertificate};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol_1e(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(k))
}

/// Bracketed irrational roots: `(x^2 - n)` times a random rational factor.
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

#[test]
fn bisection_width_is_exact_power_of_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let opts = RefineOptions {
        detect_rational: false,
        ..RefineOptions::default()
    };
    for (p, cert) in random_brackets(&mut rng, 40) {
        let k = rng.gen_range(1..=64u32);
        let target = cert.width() / Rational::from_integer(BigInt::one() << k);
        let a = bisect(&p, &cert, &target, &opts).unwrap();
        assert_eq!(a.outcome, Outcome::Converged);
        assert_eq!(a.iterations, k as usize);
        assert_eq!(a.width(), target);
    }
}

#[test]
fn methods_agree_on_random_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let tol = tol_1e(20);
    let opts = RefineOptions::default();
    let mut newton_faster = 0;
    let cases = random_brackets(&mut rng, 40);
    for (p, cert) in &cases {
        let b = bisect(p, cert, &tol, &opts).unwrap();
        let f = false_position(p, cert, &tol, 500, &opts).unwrap();
        let n = newton_refine(p, &cert.midpoint(), &tol, 200, Some(cert), &opts).unwrap();
        for a in [&b, &f, &n] {
            assert!(matches!(a.outcome, Outcome::Converged | Outcome::ExactRoot(_)), "{p}");
            assert!(a.width() <= tol, "{p}: {:?}", a.method);
        }
        let two_tol = &tol * int(2);
        assert!((b.midpoint() - f.midpoint()).abs() <= two_tol, "{p}");
        assert!((b.midpoint() - n.midpoint()).abs() <= two_tol, "{p}");
        if n.iterations < b.iterations {
            newton_faster += 1;
        }
    }
    assert!(newton_faster * 10 >= cases.len() * 9);
}

#[test]
fn six_minus_root_three_by_bisection() {
    let f2 = Polynomial::from_ints(&[198, -72, 6]);
    let cert = sign_change(&f2, &int(4), &int(5)).unwrap();
    let a = bisect(&f2, &cert, &tol_1e(12), &RefineOptions::default()).unwrap();
    assert!(a.iterations <= 45);
    // 6 - sqrt(3) lies in the final bracket: (6 - x)^2 - 3 changes sign
    let g = |x: &Rational| (int(6) - x) * (int(6) - x) - int(3);
    assert!(g(&a.lo).is_positive() && g(&a.hi).is_negative());
}
