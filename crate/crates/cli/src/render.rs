//! Text and JSON forms of exact rationals.

use cascades_core::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Default number of fractional digits in decimal renderings.
pub const DEFAULT_DIGITS: usize = 30;

fn pow10(k: usize) -> BigInt {
    BigInt::from(10).pow(k as u32)
}

/// Rounds to the nearest integer, ties to even.
fn round_half_even(x: &Rational) -> BigInt {
    let floor = x.floor().to_integer();
    let frac = x - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

/// Decimal expansion with exactly `digits` fractional digits, rounded half
/// to even. Integers are written without a fractional part.
pub fn decimal(r: &Rational, digits: usize) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let scaled = round_half_even(&(r * Rational::from_integer(pow10(digits))));
    let negative = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    if body.len() <= digits {
        body = format!("{}{body}", "0".repeat(digits + 1 - body.len()));
    }
    let (int_part, frac_part) = body.split_at(body.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `num/den` followed by its decimal value: `1/3 ≈ 0.33333`, or with `=`
/// when the expansion terminates within `digits` digits (`1/4 = 0.25`).
/// Integers are written plainly.
pub fn render_rational(r: &Rational, digits: usize) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let scaled = r * Rational::from_integer(pow10(digits));
    if scaled.is_integer() {
        let d = decimal(r, digits);
        let d = d.trim_end_matches('0');
        format!("{r} = {d}")
    } else {
        format!("{r} \u{2248} {}", decimal(r, digits))
    }
}

/// Upper bound for a positive rational in scientific notation with two
/// significant digits, e.g. `5.0e-7`.
fn scientific_ceil(x: &Rational) -> String {
    debug_assert!(x.is_positive());
    let ten = Rational::from_integer(BigInt::from(10));
    let mut exponent: i64 = 0;
    let mut scaled = x.clone();
    while scaled >= ten {
        scaled /= &ten;
        exponent += 1;
    }
    while scaled < Rational::one() {
        scaled *= &ten;
        exponent -= 1;
    }
    // 1 <= scaled < 10; keep one decimal, rounding up
    let mut tenths = (scaled * &ten).ceil().to_integer();
    if tenths == BigInt::from(100) {
        tenths = BigInt::from(10);
        exponent += 1;
    }
    let (whole, frac) = tenths.div_rem(&BigInt::from(10));
    format!("{whole}.{frac}e{exponent}")
}

/// An enclosure `(lo, hi)` as its midpoint in decimal plus an upper bound on
/// the half-width: `4.267949192 ± 5.0e-7`. A degenerate enclosure renders as
/// its value.
pub fn render_enclosure(lo: &Rational, hi: &Rational, digits: usize) -> String {
    if lo == hi {
        return render_rational(lo, digits);
    }
    let two = Rational::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    let radius = (hi - lo).abs() / two;
    format!("{} \u{b1} {}", decimal(&mid, digits), scientific_ceil(&radius))
}

/// `{"num": "...", "den": "...", "decimal": "..."}`; the exact fraction is
/// authoritative, the decimal is for reading.
pub fn rational_json(r: &Rational, digits: usize) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "decimal": decimal(r, digits),
    })
}

/// `{"lo": rational, "hi": rational}`
pub fn interval_json(lo: &Rational, hi: &Rational, digits: usize) -> Value {
    json!({
        "lo": rational_json(lo, digits),
        "hi": rational_json(hi, digits),
    })
}

/// Reads back a rational written by [`rational_json`].
pub fn rational_from_json(v: &Value) -> Option<Rational> {
    let num: BigInt = v.get("num")?.as_str()?.parse().ok()?;
    let den: BigInt = v.get("den")?.as_str()?.parse().ok()?;
    (!den.is_zero()).then(|| Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cascades_core::{int, rat};

    #[test]
    fn rational_examples() {
        assert_eq!(render_rational(&rat(1, 3), 5), "1/3 \u{2248} 0.33333");
        assert_eq!(render_rational(&int(-12), 3), "-12");
        assert_eq!(render_rational(&rat(1, 4), 5), "1/4 = 0.25");
        assert_eq!(render_rational(&rat(-2, 3), 4), "-2/3 \u{2248} -0.6667");
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(decimal(&rat(1, 8), 2), "0.12");
        assert_eq!(decimal(&rat(3, 8), 2), "0.38");
        assert_eq!(decimal(&rat(-1, 8), 2), "-0.12");
        assert_eq!(decimal(&rat(5, 2), 0), "2");
        assert_eq!(decimal(&rat(1, 200), 2), "0.00");
        assert_eq!(decimal(&rat(199, 200), 2), "1.00");
        assert_eq!(decimal(&rat(-1, 3), 1), "-0.3");
    }

    #[test]
    fn enclosure_shows_midpoint_and_width() {
        let lo = rat(4267949, 1000000);
        let hi = rat(4267950, 1000000);
        assert_eq!(render_enclosure(&lo, &hi, 7), "4.2679495 \u{b1} 5.0e-7");
        assert_eq!(render_enclosure(&int(4), &int(5), 3), "4.500 \u{b1} 5.0e-1");
        assert_eq!(render_enclosure(&int(1), &int(1), 3), "1");
    }

    #[test]
    fn scientific_rounds_up() {
        assert_eq!(scientific_ceil(&rat(1, 3)), "3.4e-1");
        assert_eq!(scientific_ceil(&rat(999, 100)), "1.0e1");
        assert_eq!(scientific_ceil(&int(1)), "1.0e0");
    }

    #[test]
    fn json_round_trip() {
        for r in [rat(-7, 3), int(0), rat(1, 1 << 40)] {
            assert_eq!(rational_from_json(&rational_json(&r, 10)), Some(r));
        }
    }
}
