//! Exact rational helpers and the `"p/q"` text format.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used for every distance and function value.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// `2^-k` as an exact dyadic rational.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Value of `r` doubled, if that is an integer (i.e. `r ∈ ½ℤ`).
pub fn to_doubled(r: &Rational) -> Option<i64> {
    to_i64(&(r * int(2)))
}

pub fn from_doubled(v: i64) -> Rational {
    ratio(v, 2)
}

/// Renders lowest-terms `p/q`, or a bare integer when the denominator is 1.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p"` or `"p/q"`. Fractions must already be in lowest terms with a
/// positive denominator so that the textual form is canonical.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            if q.is_negative() || !p.gcd(&q).is_one() {
                return Err(Error::Parse(format!("{s:?} is not in lowest terms")));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Reads a JSON number (integers only) or a `"p/q"` string.
pub fn from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::Parse(format!("non-integer JSON number {n}; use a \"p/q\" string"))),
        serde_json::Value::String(s) => parse(s),
        other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

/// Serde adapter writing a rational as its canonical string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec_as_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod opt_as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        r.as_ref().map(format).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| parse(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

pub fn max_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    it.into_iter().max().cloned()
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
