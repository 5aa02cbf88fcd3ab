use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced, denominator positive.
pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_digits(s: &str, what: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad {what} {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad {what} {s:?}: {e}")))
}

/// Parses `a` or `a/b`, with an optional leading minus on `a`.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (parse_digits(a, "numerator")?, parse_digits(b, "denominator")?),
        None => (parse_digits(body, "integer")?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {t:?}")));
    }
    let num = if neg { -num } else { num };
    Ok(BigRational::new(num, den))
}

pub fn format_scalar(x: &ExactScalar) -> String {
    x.to_string()
}

/// `max(|numerator|, denominator)`.
pub fn height(x: &ExactScalar) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Comma separated list of scalars.
pub fn parse_scalar_list(text: &str) -> Result<Vec<ExactScalar>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_scalar).collect()
}

pub fn format_scalar_list(xs: &[ExactScalar]) -> String {
    xs.iter().map(format_scalar).collect::<Vec<_>>().join(",")
}
