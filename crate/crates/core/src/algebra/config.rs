//! JSON form of a field specification: `{"p": 3, "e": 2, "modulus": "t^2+1"}`.

use serde::{Deserialize, Serialize, Serializer};

use super::field::{Field, FieldSpec};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    /// Omitted for prime fields and for the built-in extension moduli.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

fn one() -> u32 {
    1
}

impl FieldConfig {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        let prime = FieldSpec::prime(self.p)?;
        let Some(m) = &self.modulus else {
            if self.e == 1 {
                return Ok(prime);
            }
            let q = self
                .p
                .checked_pow(self.e)
                .ok_or_else(|| Error::InvalidField("order overflows".into()))?;
            return FieldSpec::canonical(q);
        };
        let fp = Field::new(prime);
        let poly = Poly::parse(m, &fp)?;
        if poly.deg_i64() != self.e as i64 {
            return Err(Error::InvalidField(format!(
                "modulus '{m}' has degree {}, expected e = {}",
                poly.deg_i64(),
                self.e
            )));
        }
        let coeffs = poly.coeffs().iter().map(|c| c.index() as u32).collect();
        FieldSpec::with_modulus(self.p, coeffs)
    }

    pub fn from_json(s: &str) -> Result<FieldSpec> {
        let cfg: FieldConfig = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.to_spec()
    }
}

impl From<&FieldSpec> for FieldConfig {
    fn from(s: &FieldSpec) -> Self {
        FieldConfig {
            p: s.p(),
            e: s.e(),
            modulus: (s.e() > 1).then(|| s.modulus_string()),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            p: u32,
            e: u32,
            q: u32,
            #[serde(skip_serializing_if = "Option::is_none")]
            modulus: Option<String>,
        }
        Out {
            p: self.p(),
            e: self.e(),
            q: self.q(),
            modulus: (self.e() > 1).then(|| self.modulus_string()),
        }
        .serialize(ser)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let spec = FieldConfig::from_json(r#"{"p": 3, "e": 2, "modulus": "t^2+1"}"#).unwrap();
        assert_eq!(spec.q(), 9);
        let back = FieldConfig::from(&spec);
        assert_eq!(back.to_spec().unwrap(), spec);
        assert!(FieldConfig::from_json(r#"{"p": 2, "e": 2, "modulus": "t^2+1"}"#).is_err());
        assert!(FieldConfig::from_json(r#"{"p": 4}"#).is_err());
        assert_eq!(
            FieldConfig::from_json(r#"{"p": 2, "e": 3}"#).unwrap().q(),
            8
        );
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["modulus"], "t^2+1");
    }
}
