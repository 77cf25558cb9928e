//! Decimal-string encodings for exact values in JSON.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{parse_int, parse_rat, BigInt, Rat, Surd};

pub(crate) fn big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn rat<S: Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn big_vec<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn rat_vec<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn opt_rat<S: Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn opt_surd<S: Serializer>(v: &Option<Surd>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&surd_json(v)),
        None => s.serialize_none(),
    }
}

/// Integers may be written as strings or as plain JSON numbers.
pub(crate) fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::String(s) => parse_int(s),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_int(&n.to_string()),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

pub(crate) fn json_rat(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::String(s) => parse_rat(s),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// `"r"` for a rational surd, `{"rational": "r", "sqrt_factor": "s"}` otherwise.
pub(crate) fn surd_json(v: &Surd) -> serde_json::Value {
    if v.is_rational() {
        serde_json::Value::String(v.coeff.to_string())
    } else {
        serde_json::json!({ "rational": v.coeff.to_string(), "sqrt_factor": v.radicand.to_string() })
    }
}

pub(crate) fn surd_from_json(v: &serde_json::Value) -> Result<Surd> {
    let checked = |coeff: Rat, radicand: BigInt| {
        if coeff < Rat::from_integer(BigInt::from(0)) {
            return Err(Error::Parse(format!("negative value {coeff}")));
        }
        if radicand < BigInt::from(1) {
            return Err(Error::Parse(format!("sqrt_factor must be positive, got {radicand}")));
        }
        Ok(Surd::new(coeff, radicand))
    };
    match v {
        serde_json::Value::Object(map) => {
            let r = map.get("rational").ok_or_else(|| Error::Parse("missing \"rational\"".into()))?;
            let s = map.get("sqrt_factor").map(json_int).transpose()?.unwrap_or_else(|| BigInt::from(1));
            checked(json_rat(r)?, s)
        }
        other => checked(json_rat(other)?, BigInt::from(1)),
    }
}

pub(crate) fn surd<S: Serializer>(v: &Surd, s: S) -> std::result::Result<S::Ok, S::Error> {
    surd_json(v).serialize(s)
}
