//! Exact text forms for rationals: parsing of integer, fraction, and decimal
//! strings, and dual fraction/decimal rendering for reports.

use std::cmp::Ordering;

use kgain::{Int, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// One number rendered both ways. The fraction is exact and round-trips
/// through [`parse_rational`]; the decimal is fixed-point, rounded half to
/// even at the configured precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quantity {
    pub fraction: String,
    pub decimal: String,
}

impl Quantity {
    pub fn of(value: &Rational, precision: usize) -> Self {
        Quantity {
            fraction: render_fraction(value),
            decimal: render_decimal(value, precision),
        }
    }

    /// Compact single-cell form for tables.
    pub fn cell(&self) -> String {
        format!("{} ({})", self.fraction, self.decimal)
    }
}

/// Parses `"42"`, `"-7/3"`, or `"0.125"` into an exact rational. Decimal
/// strings are scaled integers, so `"0.1"` is exactly one tenth. Exponents
/// and binary-float spellings are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let trimmed = text.trim();
    let complain = || format!("cannot read {trimmed:?} as an integer, fraction, or decimal");
    let (negative, digits) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let value = if let Some((num, den)) = digits.split_once('/') {
        let num = parse_digits(num).ok_or_else(complain)?;
        let den = parse_digits(den).ok_or_else(complain)?;
        if den.is_zero() {
            return Err(format!("{trimmed:?} has a zero denominator"));
        }
        Rational::new(num, den)
    } else if let Some((whole, frac)) = digits.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(complain());
        }
        let whole = if whole.is_empty() {
            Int::zero()
        } else {
            parse_digits(whole).ok_or_else(complain)?
        };
        let frac_digits = if frac.is_empty() {
            Int::zero()
        } else {
            parse_digits(frac).ok_or_else(complain)?
        };
        let scale = pow10(frac.len());
        Rational::new(whole * &scale + frac_digits, scale)
    } else {
        Rational::from_integer(parse_digits(digits).ok_or_else(complain)?)
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(text: &str) -> Option<Int> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

fn pow10(exponent: usize) -> Int {
    let ten = Int::from(10);
    let mut out = Int::one();
    for _ in 0..exponent {
        out *= &ten;
    }
    out
}

/// Reduced fraction string: `"p/q"`, or just `"p"` for integers.
pub fn render_fraction(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fixed-point decimal with `precision` places, rounded half to even.
pub fn render_decimal(value: &Rational, precision: usize) -> String {
    let scaled = value.numer().abs() * pow10(precision);
    let denom = value.denom().abs();
    let (mut units, remainder) = scaled.div_rem(&denom);
    match (&remainder * Int::from(2)).cmp(&denom) {
        Ordering::Greater => units += 1,
        Ordering::Equal if units.is_odd() => units += 1,
        _ => {}
    }
    let sign = if value.is_negative() && !units.is_zero() {
        "-"
    } else {
        ""
    };
    if precision == 0 {
        return format!("{sign}{units}");
    }
    let (whole, frac) = units.div_rem(&pow10(precision));
    format!("{sign}{whole}.{frac:0>precision$}")
}
