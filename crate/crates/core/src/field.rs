//! Coefficient fields for characters and point coordinates: ℚ or a prime field.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Q};

/// A field context. Elements carry no reference to the context, so every
/// operation goes through it.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_rational(&self, x: &Q) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    /// `"q"` or `"fp:P"`.
    fn name(&self) -> String;
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `None` only for a negative power of zero.
    fn pow(&self, a: &Self::Elem, k: i64) -> Option<Self::Elem> {
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        Some(acc)
    }

    fn parse(&self, s: &str) -> Result<Self::Elem> {
        self.from_rational(&parse_rational(s)?)
    }

    fn parse_unit(&self, s: &str) -> Result<Self::Elem> {
        let x = self.parse(s)?;
        if self.is_zero(&x) {
            return Err(Error::Validation(format!(
                "{s:?} is zero in {}, expected a unit",
                self.name()
            )));
        }
        Ok(x)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn from_i64(&self, v: i64) -> Q {
        Q::from_integer(v.into())
    }
    fn from_rational(&self, x: &Q) -> Result<Q> {
        Ok(x.clone())
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn format(&self, a: &Q) -> String {
        format_rational(a)
    }
    fn name(&self) -> String {
        "q".into()
    }
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Q {
        let n: i64 = rng.random_range(1..=9);
        let d: i64 = rng.random_range(1..=9);
        let s = if rng.random_bool(0.5) { 1 } else { -1 };
        Q::new((s * n).into(), d.into())
    }
}

/// The field with `p` elements, `p` prime and below 2^31 so products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::Validation(format!("prime {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().unwrap_or(0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, x: &Q) -> Result<u64> {
        let d = self.reduce(x.denom());
        let d = self.inv(&d).ok_or_else(|| {
            Error::Validation(format!(
                "denominator of {} vanishes mod {}",
                format_rational(x),
                self.p
            ))
        })?;
        Ok(self.mul(&self.reduce(x.numer()), &d))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            return None;
        }
        let g = BigInt::from(*a).extended_gcd(&BigInt::from(self.p));
        Some(self.reduce(&g.x))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("fp:{}", self.p)
    }
    fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(1..self.p)
    }
}

/// Field selection as written on the command line or in a config file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl FieldChoice {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldChoice::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field {s:?}")))?;
            PrimeField::new(p)?;
            return Ok(FieldChoice::Prime(p));
        }
        Err(Error::Parse(format!("unknown field {s:?}, expected q or fp:P")))
    }
}
