//! JSON (de)serialization of f64 values that may be non-finite.
//!
//! JSON has no literal for infinities or NaN. Finite values serialize as
//! plain numbers (serde_json's shortest round-trip encoding); non-finite
//! values serialize as the strings `"inf"`, `"-inf"` and `"nan"` so model
//! files survive exact fits (AIC/BIC of -inf, infinite t statistics).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MaybeFinite {
    Num(f64),
    Named(String),
}

fn encode(v: f64) -> MaybeFinite {
    if v.is_finite() {
        MaybeFinite::Num(v)
    } else if v.is_nan() {
        MaybeFinite::Named("nan".to_string())
    } else if v > 0.0 {
        MaybeFinite::Named("inf".to_string())
    } else {
        MaybeFinite::Named("-inf".to_string())
    }
}

fn decode<E: serde::de::Error>(m: MaybeFinite) -> Result<f64, E> {
    match m {
        MaybeFinite::Num(v) => Ok(v),
        MaybeFinite::Named(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(E::custom(format!("unknown float literal {other:?}"))),
        },
    }
}

pub fn serialize<S: Serializer>(v: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    encode(*v).serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    decode(MaybeFinite::deserialize(deserializer)?)
}

/// Same encoding for `Vec<f64>` fields.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
        let encoded: Vec<MaybeFinite> = v.iter().map(|&x| encode(x)).collect();
        encoded.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<f64>, D::Error> {
        let encoded = Vec::<MaybeFinite>::deserialize(deserializer)?;
        encoded.into_iter().map(decode).collect()
    }
}
