//! Exact rational helpers and the doubled-integer encoding of half-integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Half of a doubled integer.
pub fn half(doubled: i64) -> Q {
    q_frac(doubled, 2)
}

/// Parses `"p/q"`, `"p"` or a signed integer.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `p/q` with `q > 0`, so integers print as `n/1`.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Integers print bare, proper fractions as `p/q`.
pub fn format_rational_short(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format_rational(x)
    }
}

/// Half-integer level in doubled encoding: `7` prints as `"7/2"`, `6` as `"3"`.
pub fn format_half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

/// Inverse of [`format_half`]; accepts any rational with denominator 1 or 2.
pub fn parse_half(s: &str) -> Result<i64> {
    let x = parse_rational(s)?;
    let doubled = x * q(2);
    if !doubled.is_integer() {
        return Err(Error::Parse(format!("{s:?} is not a half-integer")));
    }
    doubled
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Parse(format!("{s:?} is out of range")))
}

pub fn floor_q(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_q(x: &Q) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// The integer of least magnitude in the interval with the given bounds, if any.
/// A bound is `(value, strict)`.
pub fn integer_in(lower: Option<(&Q, bool)>, upper: Option<(&Q, bool)>) -> Option<BigInt> {
    let lo = lower.map(|(v, strict)| {
        let f = floor_q(v);
        if strict || !v.is_integer() {
            f + 1
        } else {
            f
        }
    });
    let hi = upper.map(|(v, strict)| {
        let c = ceil_q(v);
        if strict || !v.is_integer() {
            c - 1
        } else {
            c
        }
    });
    let zero = BigInt::zero();
    let pick = match (&lo, &hi) {
        (Some(l), Some(h)) if l > h => return None,
        (Some(l), _) if l > &zero => l.clone(),
        (_, Some(h)) if h < &zero => h.clone(),
        _ => zero,
    };
    Some(pick)
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(format_rational(&parse_rational("8").unwrap()), "8/1");
        assert_eq!(format_rational_short(&q(8)), "8");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn half_levels() {
        assert_eq!(format_half(7), "7/2");
        assert_eq!(format_half(-6), "-3");
        assert_eq!(parse_half("7/2").unwrap(), 7);
        assert_eq!(parse_half("-3").unwrap(), -6);
        assert!(parse_half("1/3").is_err());
    }

    #[test]
    fn floors_and_ceilings() {
        assert_eq!(floor_q(&q_frac(-1, 2)), BigInt::from(-1));
        assert_eq!(ceil_q(&q_frac(-1, 2)), BigInt::from(0));
        assert_eq!(ceil_q(&q(3)), BigInt::from(3));
    }

    #[test]
    fn smallest_integer_in_interval() {
        let two = q(2);
        let zero = q(0);
        assert_eq!(
            integer_in(Some((&zero, true)), Some((&two, true))),
            Some(BigInt::from(1))
        );
        let a = q_frac(1, 3);
        let b = q_frac(2, 3);
        assert_eq!(integer_in(Some((&a, false)), Some((&b, false))), None);
        assert_eq!(integer_in(None, None), Some(BigInt::zero()));
        let m = q(-5);
        assert_eq!(integer_in(None, Some((&m, true))), Some(BigInt::from(-6)));
    }
}
