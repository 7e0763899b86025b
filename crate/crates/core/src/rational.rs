//! Exact rationals and their `[num, den]` JSON encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest double to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn big_to_json(b: &BigInt) -> serde_json::Value {
    match b.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(b.to_string()),
    }
}

fn big_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// `[num, den]` with the fraction in lowest terms and a positive denominator.
/// Integers that do not fit in an `i64` are written as decimal strings.
pub fn to_json(r: &Rational) -> serde_json::Value {
    serde_json::Value::Array(vec![big_to_json(r.numer()), big_to_json(r.denom())])
}

pub fn from_json(v: &serde_json::Value) -> Option<Rational> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let num = big_from_json(&arr[0])?;
    let den = big_from_json(&arr[1])?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Serde adapter: `#[serde(with = "crate::rational::json")]`.
pub mod json {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_json(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).ok_or_else(|| D::Error::custom("expected [num, den] with den != 0"))
    }
}

pub mod json_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => to_json(r).serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        if v.is_null() {
            return Ok(None);
        }
        from_json(&v)
            .map(Some)
            .ok_or_else(|| D::Error::custom("expected [num, den] or null"))
    }
}

pub mod json_vec {
    use super::*;

    pub fn serialize<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        serde_json::Value::Array(rs.iter().map(to_json).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .enumerate()
            .map(|(i, e)| {
                from_json(e).ok_or_else(|| D::Error::custom(format!("entry {i}: expected [num, den]")))
            })
            .collect()
    }
}
