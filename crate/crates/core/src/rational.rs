//! Exact rational scalars: decimal parsing, half-even rendering, and small
//! construction helpers used throughout the crate.
//!
//! All algebraic analysis works over arbitrary-precision rationals so that
//! rank computations, nullspaces, and equilibrium solves are exact. Decimal
//! literals in input files are parsed exactly (`"0.2729"` becomes
//! `2729/10000`), never via floating point.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar used by all matrix and network algebra.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer pair. Panics on zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `x^p` for a small non-negative integer exponent.
pub fn rat_pow(x: &Rational, p: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..p {
        acc *= x;
    }
    acc
}

/// Lossy conversion for simulation and report layers.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecimalError {
    #[error("empty decimal literal")]
    Empty,
    #[error("invalid decimal literal {0:?}")]
    Invalid(String),
}

/// Parses a decimal literal into an exact rational.
///
/// Accepted forms: optional sign, integer part, optional fractional part,
/// optional integer exponent (`-1.5e-3`). At least one digit must be present.
pub fn parse_decimal(text: &str) -> Result<Rational, DecimalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(DecimalError::Empty);
    }
    let invalid = || DecimalError::Invalid(text.to_owned());

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| invalid())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };

    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };

    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(invalid());
    }

    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().map_err(|_| invalid())?
    };
    let ten = BigInt::from(10);
    for c in frac_part.chars() {
        numer = numer * &ten + BigInt::from(c.to_digit(10).unwrap());
    }
    let mut denom = BigInt::one();
    for _ in 0..frac_part.len() {
        denom *= &ten;
    }

    let mut value = Rational::new(numer * BigInt::from(sign), denom);
    if exponent != 0 {
        let scale = rat_pow(&rat(10, 1), exponent.unsigned_abs() as u32);
        if exponent > 0 {
            value *= scale;
        } else {
            value /= scale;
        }
    }
    Ok(value)
}

/// Renders a rational as a fixed-point decimal with `digits` places after the
/// point, rounding half to even.
pub fn format_decimal(r: &Rational, digits: u32) -> String {
    let neg = r.is_negative();
    let abs = r.abs();
    let mut scale = BigInt::one();
    for _ in 0..digits {
        scale *= 10;
    }
    // abs * scale = q + rem/denom with 0 <= rem < denom
    let scaled_numer = abs.numer() * &scale;
    let denom = abs.denom().clone();
    let mut q = &scaled_numer / &denom;
    let rem = &scaled_numer % &denom;
    let twice = &rem * BigInt::from(2);
    let round_up = match twice.cmp(&denom) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => (&q % BigInt::from(2)) == BigInt::one(),
    };
    if round_up {
        q += 1;
    }
    let digits_str = q.to_string();
    let body = if digits == 0 {
        digits_str
    } else {
        let d = digits as usize;
        let padded = if digits_str.len() <= d {
            format!("{}{}", "0".repeat(d + 1 - digits_str.len()), digits_str)
        } else {
            digits_str
        };
        let split = padded.len() - d;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if neg && body.chars().any(|c| c.is_ascii_digit() && c != '0') {
        format!("-{body}")
    } else {
        body
    }
}

/// Renders a rational exactly as a decimal string, or `None` when the reduced
/// denominator has a prime factor other than 2 or 5 (no finite decimal form).
///
/// Values obtained from `parse_decimal` always render, and the output parses
/// back to the same rational, so document round-trips are lossless.
pub fn format_exact_decimal(r: &Rational) -> Option<String> {
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut rest = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return None;
    }
    let places = twos.max(fives) as usize;
    let mut scaled = r.numer().abs();
    for _ in 0..places {
        scaled *= 10;
    }
    scaled /= r.denom();
    let digits = scaled.to_string();
    let body = if places == 0 {
        digits
    } else {
        let padded = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = padded.len() - places;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if r.is_negative() {
        Some(format!("-{body}"))
    } else {
        Some(body)
    }
}

/// Renders a float with up to `sig` significant digits, trailing zeros
/// trimmed. Used by the CSV writers.
pub fn format_f64_sig(x: f64, sig: u32) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let places = (sig as i32 - 1 - magnitude).clamp(0, 17) as usize;
    let mut s = format!("{x:.places$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
