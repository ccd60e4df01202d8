//! Report serialization: complex numbers as {re, im}, log-scaled values as
//! {log_modulus, phase}, and a reproducibility metadata block embedded in
//! every artifact.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cx::C64;

/// serde adapter: Complex64 <-> {"re": f64, "im": f64}.
pub mod c64_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Cx {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &C64, s: S) -> Result<S::Ok, S::Error> {
        Cx { re: v.re, im: v.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let c = Cx::deserialize(d)?;
        Ok(C64::new(c.re, c.im))
    }
}

/// serde adapter for Option<Complex64>.
pub mod c64_opt_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Cx {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|z| Cx { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<Cx>::deserialize(d)?.map(|c| C64::new(c.re, c.im)))
    }
}

/// Reproducibility metadata carried by every emitted report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Metadata {
    pub tool_version: String,
    pub convention: String,
    pub truncation: serde_json::Value,
    pub tolerances: serde_json::Value,
}

impl Metadata {
    pub fn new(
        convention: &str,
        truncation: serde_json::Value,
        tolerances: serde_json::Value,
    ) -> Self {
        Metadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            convention: convention.to_string(),
            truncation,
            tolerances,
        }
    }
}

/// A report artifact: metadata plus a payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report<T> {
    pub meta: Metadata,
    pub payload: T,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> crate::error::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "c64_serde")]
        z: C64,
        #[serde(with = "c64_opt_serde")]
        maybe: Option<C64>,
    }

    #[test]
    fn complex_named_fields_round_trip() {
        let w = Wrap { z: C64::new(-1.5, 2.25), maybe: Some(C64::new(0.0, 0.0)) };
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.contains("\"re\":-1.5") && json.contains("\"im\":2.25"));
        // an exact zero serializes as {re: 0, im: 0}
        assert!(json.contains("\"re\":0.0") && json.contains("\"im\":0.0"));
        let back: Wrap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn logscaled_named_fields() {
        let ls = crate::cx::LogScaled { log_modulus: 3.5, phase: -0.75 };
        let json = serde_json::to_string(&ls).unwrap();
        assert!(json.contains("log_modulus") && json.contains("phase"));
        let back: crate::cx::LogScaled = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ls);
    }
}
