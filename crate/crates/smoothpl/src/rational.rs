//! Exact rational helpers shared by every module.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Q = BigRational;

/// Failure to read a rational from text.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as an exact rational")]
pub struct RationalParseError(pub String);

/// Integer as a rational.
pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The fraction `n/d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-7/4"` or a decimal literal such as `"0.125"` or `"1e-3"` exactly.
pub fn parse(text: &str) -> Result<Q, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{fraction}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    let scale = exponent - fraction.len() as i32;
    let ten = BigInt::from(10);
    let mut q = Q::from_integer(n);
    if scale >= 0 {
        q *= Q::from_integer(num::pow(ten, scale as usize));
    } else {
        q /= Q::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}

/// Nearest `f64`.
pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The exact rational value of a finite float.
///
/// # Panics
/// Panics on NaN or infinity.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// `sqrt(q)` when numerator and denominator are perfect squares.
pub fn sqrt_exact(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Q::new(n, d))
}

/// A rational `r` with `0 <= r` and `r^2 <= q`, within a relative `2^-40` of `sqrt(q)`.
pub fn sqrt_below(q: &Q) -> Q {
    if !q.is_positive() {
        return Q::zero();
    }
    if let Some(r) = sqrt_exact(q) {
        return r;
    }
    let mut r = from_f64(to_f64(q).sqrt() * (1.0 - 1e-12));
    while &(&r * &r) > q {
        r = &r * frac(999, 1000);
    }
    r
}

/// A rational `r` with `r^2 >= q`, within a relative `2^-40` of `sqrt(q)`.
pub fn sqrt_above(q: &Q) -> Q {
    if !q.is_positive() {
        return Q::zero();
    }
    if let Some(r) = sqrt_exact(q) {
        return r;
    }
    let mut r = from_f64(to_f64(q).sqrt() * (1.0 + 1e-12));
    while &(&r * &r) < q {
        r = &r * frac(1001, 1000);
    }
    r
}

/// `1/2^k`.
pub fn pow2_inv(k: u32) -> Q {
    Q::new(BigInt::one(), num::pow(BigInt::from(2), k as usize))
}

/// Canonical `[numerator, denominator]` decimal strings.
pub fn to_pair(q: &Q) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

/// Inverse of [`to_pair`].
pub fn from_pair(num: &str, den: &str) -> Result<Q, RationalParseError> {
    let err = || RationalParseError(format!("[{num}, {den}]"));
    let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
    let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse("-2.50").unwrap(), frac(-5, 2));
        assert_eq!(parse("1e-3").unwrap(), frac(1, 1000));
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(".5").unwrap(), frac(1, 2));
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for q in [frac(2, 1), frac(1, 3), frac(1, 1_000_000_007), frac(49, 4)] {
            let lo = sqrt_below(&q);
            let hi = sqrt_above(&q);
            assert!(&lo * &lo <= q);
            assert!(&hi * &hi >= q);
            assert!(to_f64(&(&hi - &lo)) <= 1e-9 * to_f64(&hi));
        }
    }

    #[test]
    fn pair_roundtrip() {
        let q = frac(-22, 7);
        let [n, d] = to_pair(&q);
        assert_eq!(from_pair(&n, &d).unwrap(), q);
    }
}
