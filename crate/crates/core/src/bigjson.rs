//! Serde adapters writing arbitrary-precision integers as plain JSON numbers.
//!
//! These rely on `serde_json`'s `arbitrary_precision` feature, so the wire
//! form is exact for any size and readable by other JSON tools.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number<T: ToString, E: serde::ser::Error>(v: &T) -> Result<Number, E> {
    Number::from_str(&v.to_string()).map_err(E::custom)
}

fn from_number<T: FromStr, E: serde::de::Error>(n: &Number) -> Result<T, E> {
    let s = n.to_string();
    s.parse::<T>()
        .map_err(|_| E::custom(format!("expected an integer, found {s}")))
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number::<_, S::Error>(v)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_number(&Number::deserialize(d)?)
    }
}

pub mod uint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        to_number::<_, S::Error>(v)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        from_number(&Number::deserialize(d)?)
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums = v
            .iter()
            .map(to_number::<_, S::Error>)
            .collect::<Result<Vec<_>, _>>()?;
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect()
    }
}

pub mod uint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let nums = v
            .iter()
            .map(to_number::<_, S::Error>)
            .collect::<Result<Vec<_>, _>>()?;
        nums.serialize(s)
    }
}

pub mod opt_uint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigUint>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::uint_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigUint>>, D::Error> {
        Option::<Vec<Number>>::deserialize(d)?
            .map(|v| v.iter().map(from_number).collect())
            .transpose()
    }
}
