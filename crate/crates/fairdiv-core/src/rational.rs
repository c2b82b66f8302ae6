//! Exact rational values and their text form.
//!
//! Utilities, prices and welfare values are all stored as arbitrary-precision
//! rationals in lowest terms; nothing in the crate ever rounds. The text form
//! accepts integers, decimal strings ("0.25") and explicit fractions ("1/3"),
//! and `parse(format(x)) == x` for every value.

use alloc::string::String;
use alloc::string::ToString;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand constructor, mostly for tests and fixtures.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    Empty,
    InvalidNumber(String),
    ZeroDenominator,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRationalError::Empty => write!(f, "empty number"),
            ParseRationalError::InvalidNumber(s) => write!(f, "invalid number: {s:?}"),
            ParseRationalError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt, ParseRationalError> {
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseRationalError::InvalidNumber(s.to_string()))
}

/// Parses an integer, a decimal ("12.5") or a fraction ("3/7") into an exact
/// rational. Decimals are exact: "0.1" is one tenth, not a float.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_bigint(num)?;
        let den = parse_bigint(den)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator);
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::InvalidNumber(s.to_string()));
        }
        let negative = whole.starts_with('-');
        let whole_part = parse_bigint(if whole == "-" || whole.is_empty() {
            "0"
        } else {
            whole
        })?;
        let frac_part = parse_bigint(frac)?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = whole_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    Ok(Rational::from_integer(parse_bigint(s)?))
}

/// Renders a rational in the shortest exact text form: an integer when the
/// denominator is one, a terminating decimal when the denominator divides a
/// power of ten, and "num/den" otherwise.
pub fn format_rational(r: &Rational) -> String {
    let num = r.numer();
    let den = r.denom();
    if den.is_one() {
        return num.to_string();
    }
    // Count the factors of 2 and 5; if anything remains, the decimal
    // expansion does not terminate and we fall back to a fraction.
    let mut rest = den.clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while rest.is_multiple_of(&two) {
        rest /= &two;
        twos += 1;
    }
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return alloc::format!("{num}/{den}");
    }
    let digits = twos.max(fives);
    let scaled = num * BigInt::from(10u32).pow(digits) / den;
    let sign = if scaled.is_negative() { "-" } else { "" };
    let body = scaled.abs().to_string();
    let digits = digits as usize;
    if body.len() > digits {
        let (whole, frac) = body.split_at(body.len() - digits);
        alloc::format!("{sign}{whole}.{frac}")
    } else {
        alloc::format!("{sign}0.{body:0>digits$}")
    }
}
