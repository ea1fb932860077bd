//! Serde helpers: reals as decimal strings, wide integers as decimal strings.

use bounds::{Approx, Real};
use serde::{de::Error, Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Str(String),
    F(f64),
}

pub(crate) fn parse_decimal(s: &str) -> Option<Approx> {
    let t = s.trim();
    if t.is_empty() || t.parse::<f64>().map(|v| !v.is_finite()).unwrap_or(true) {
        return None;
    }
    Some(Approx::lit(t))
}

pub mod approx {
    use super::*;

    pub fn serialize<S: Serializer>(a: &Approx, s: S) -> Result<S::Ok, S::Error> {
        // nudged up so that a round trip never lands below the stored bound
        let up = crate::upper(a) * (Real::from_u64(1) + Real::parse("1e-58"));
        s.serialize_str(&up.to_sci(60))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Approx, D::Error> {
        match Num::deserialize(d)? {
            Num::Str(s) => parse_decimal(&s).ok_or_else(|| D::Error::custom(format!("not a decimal: {s}"))),
            Num::F(v) if v.is_finite() => Ok(Approx::exact(Real::from_f64(v))),
            Num::F(v) => Err(D::Error::custom(format!("not finite: {v}"))),
        }
    }
}

pub mod wide {
    use super::*;

    pub fn serialize<S: Serializer>(x: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        match Num::deserialize(d)? {
            Num::Str(s) => s.trim().parse().map_err(|_| D::Error::custom(format!("not an integer: {s}"))),
            Num::F(v) if v >= 0.0 && v.fract() == 0.0 && v < 9.0e15 => Ok(v as u128),
            Num::F(v) => Err(D::Error::custom(format!("integer out of exact range: {v}"))),
        }
    }
}
