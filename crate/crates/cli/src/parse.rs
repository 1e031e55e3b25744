//! Text input: polynomials and exact numbers.
//!
//! A polynomial is either a constant-first coefficient list such as
//! `473,-648,198,-24,1`, or human syntax such as
//! `x^4 - 24x^3 + 198x^2 - 648x + 473`. In human syntax each term is
//! `[+|-][coef][*][x[^exp]]` with an integer or fraction coefficient
//! (`3/2x^2`), whitespace is ignored, any single-letter variable may be used
//! consistently, and repeated exponents are summed.

use cascades_core::{Polynomial, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Largest exponent accepted, to keep dense storage bounded.
pub const MAX_EXPONENT: usize = 10_000;

/// Malformed input, with the character offset (from zero) where it was
/// detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Non-whitespace characters with their offsets in the original text.
struct Cursor {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, if c == '\u{2212}' { '-' } else { c }))
            .collect();
        Cursor {
            chars,
            at: 0,
            end: text.chars().count(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return None;
        }
        let s: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        Some(s.parse().expect("ascii digits"))
    }

    /// `digits [/ digits]`
    fn unsigned_fraction(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if !self.eat('/') {
            return Ok(Some(Rational::from_integer(num)));
        }
        let pos = self.position();
        let den = self
            .digits()
            .ok_or_else(|| ParseError::new(pos, "expected a denominator after '/'"))?;
        if den.is_zero() {
            return Err(ParseError::new(pos, "zero denominator"));
        }
        Ok(Some(Rational::new(num, den)))
    }
}

/// Parses a polynomial in either accepted syntax. `0` is the zero
/// polynomial; empty input is an error.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return Err(ParseError::new(0, "empty polynomial"));
    }
    if cur.chars.iter().any(|&(_, c)| c == ',') {
        parse_coefficient_list(&mut cur)
    } else {
        parse_terms(&mut cur)
    }
}

fn parse_coefficient_list(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    let mut coeffs = Vec::new();
    loop {
        let pos = cur.position();
        let negative = match cur.peek() {
            Some('-') => {
                cur.bump();
                true
            }
            Some('+') => {
                cur.bump();
                false
            }
            _ => false,
        };
        let value = cur
            .unsigned_fraction()?
            .ok_or_else(|| ParseError::new(pos, "expected a coefficient"))?;
        coeffs.push(if negative { -value } else { value });
        match cur.bump() {
            None => break,
            Some(',') => {}
            Some(c) => {
                return Err(ParseError::new(
                    cur.chars[cur.at - 1].0,
                    format!("unexpected '{c}' in coefficient list"),
                ))
            }
        }
    }
    Ok(Polynomial::new(coeffs))
}

fn parse_terms(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut variable: Option<char> = None;
    let mut first = true;
    while cur.peek().is_some() {
        let term_pos = cur.position();
        let negative = match cur.peek() {
            Some('-') => {
                cur.bump();
                true
            }
            Some('+') => {
                cur.bump();
                false
            }
            Some(_) if first => false,
            Some(c) => {
                return Err(ParseError::new(
                    term_pos,
                    format!("expected '+' or '-' before the next term, found '{c}'"),
                ))
            }
            None => unreachable!(),
        };
        first = false;

        let coef = cur.unsigned_fraction()?;
        let star_pos = cur.position();
        let starred = cur.eat('*');
        let var_pos = cur.position();
        let exponent = match cur.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                cur.bump();
                match variable {
                    None => variable = Some(c),
                    Some(v) if v != c => {
                        return Err(ParseError::new(
                            var_pos,
                            format!("mixed variables '{v}' and '{c}'"),
                        ))
                    }
                    Some(_) => {}
                }
                if cur.eat('^') {
                    let exp_pos = cur.position();
                    let e = cur
                        .digits()
                        .ok_or_else(|| ParseError::new(exp_pos, "exponent must be a nonnegative integer"))?;
                    if cur.peek().is_some_and(|c| c == '.' || c == '/') {
                        return Err(ParseError::new(exp_pos, "exponent must be a nonnegative integer"));
                    }
                    usize::try_from(&e)
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| ParseError::new(exp_pos, format!("exponent exceeds {MAX_EXPONENT}")))?
                } else {
                    1
                }
            }
            _ => {
                if starred {
                    return Err(ParseError::new(star_pos, "expected a variable after '*'"));
                }
                if coef.is_none() {
                    let message = match cur.peek() {
                        Some(c) => format!("malformed term: unexpected '{c}'"),
                        None => "malformed term: expected a coefficient or variable".to_string(),
                    };
                    return Err(ParseError::new(cur.position(), message));
                }
                0
            }
        };
        if starred && coef.is_none() {
            return Err(ParseError::new(star_pos, "'*' without a coefficient"));
        }
        let mut value = coef.unwrap_or_else(Rational::one);
        if negative {
            value = -value;
        }
        if coeffs.len() <= exponent {
            coeffs.resize(exponent + 1, Rational::zero());
        }
        coeffs[exponent] += value;
    }
    Ok(Polynomial::new(coeffs))
}

/// Parses an exact number: an integer, a fraction `a/b`, or a decimal with
/// an optional exponent (`0.25`, `1e-20`, `-3.5E2`). Decimals are converted
/// exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let trimmed = text.trim().replace('\u{2212}', "-");
    let offset = text.len() - text.trim_start().len();
    let err = |message: &str| ParseError::new(offset, format!("{message}: '{}'", text.trim()));
    if trimmed.is_empty() {
        return Err(ParseError::new(0, "empty number"));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let num: BigInt = num.parse().map_err(|_| err("malformed numerator"))?;
        let den: BigInt = den.parse().map_err(|_| err("malformed denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match trimmed.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = trimmed[i + 1..].parse().map_err(|_| err("malformed exponent"))?;
            (&trimmed[..i], e)
        }
        None => (trimmed.as_str(), 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(err("malformed number"));
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(err("exponent out of range"));
    }
    let all_digits: BigInt = format!("{int_part}{frac_part}0").parse().expect("digits");
    let scale = exponent - frac_part.len() as i64 - 1;
    let ten = BigInt::from(10);
    let magnitude = if scale >= 0 {
        Rational::from_integer(all_digits * ten.pow(scale as u32))
    } else {
        Rational::new(all_digits, ten.pow(scale.unsigned_abs() as u32))
    };
    Ok(if negative { -magnitude } else { magnitude })
}

/// Parses `lo,hi` into an interval with `lo < hi`.
pub fn parse_interval(text: &str) -> Result<(Rational, Rational), ParseError> {
    let Some((a, b)) = text.split_once(',') else {
        return Err(ParseError::new(0, "interval must be written lo,hi"));
    };
    let lo = parse_rational(a)?;
    let hi = parse_rational(b).map_err(|e| ParseError {
        position: e.position + a.chars().count() + 1,
        ..e
    })?;
    if lo >= hi {
        return Err(ParseError::new(0, format!("empty interval: {lo} >= {hi}")));
    }
    Ok((lo, hi))
}
