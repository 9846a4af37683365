//! JSON formats for cones, fans and group elements.
//!
//! Integers are JSON numbers when `|v| <= 2^53` and decimal strings beyond;
//! both forms are accepted on input.
//!
//! ```json
//! {"g": 2, "scale": 1,
//!  "generators": [[[1,0],[0,0]], [[0,0],[0,1]], [[1,-1],[-1,1]]],
//!  "labels": ["z11", "z22", "z12"]}
//! ```

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::{GroupElement, MarkedCone, SymIntMat};
use crate::error::{Error, Result};
use crate::poly::Rational;

const SAFE: i64 = 1 << 53;

pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) if x.abs() <= SAFE => s.serialize_i64(x),
        _ => s.serialize_str(&v.to_string()),
    }
}

/// Exact rational as `"num/den"`.
pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

pub fn serialize_rationals<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(|q| format!("{}/{}", q.numer(), q.denom())))
}

/// Integer that reads from a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bigint(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            U(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(x) => Ok(JsonInt(BigInt::from(x))),
            Raw::U(x) => Ok(JsonInt(BigInt::from(x))),
            Raw::S(s) => s
                .trim()
                .parse()
                .map(JsonInt)
                .map_err(|_| D::Error::custom(format!("invalid integer string {s:?}"))),
        }
    }
}

type IntMatrix = Vec<Vec<JsonInt>>;

fn to_rows(m: &[Vec<JsonInt>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

fn from_rows(m: Vec<Vec<BigInt>>) -> IntMatrix {
    m.into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub g: usize,
    #[serde(default = "unit_scale")]
    pub scale: JsonInt,
    pub generators: Vec<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn unit_scale() -> JsonInt {
    JsonInt(BigInt::one())
}

impl ConeSpec {
    pub fn from_cone(c: &MarkedCone) -> Self {
        ConeSpec {
            name: None,
            g: c.g(),
            scale: JsonInt(c.scale().clone()),
            generators: c.generators().iter().map(|m| from_rows(m.rows())).collect(),
            labels: c.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_cone(&self) -> Result<MarkedCone> {
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if m.len() != self.g || m.iter().any(|r| r.len() != self.g) {
                    return Err(Error::Malformed(format!(
                        "generators[{i}] is not a {0}x{0} matrix",
                        self.g
                    )));
                }
                SymIntMat::new(to_rows(m))
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedCone::new(self.g, self.scale.0.clone(), gens, self.labels.clone())
    }
}

pub fn serialize_cone<S: Serializer>(c: &MarkedCone, s: S) -> std::result::Result<S::Ok, S::Error> {
    ConeSpec::from_cone(c).serialize(s)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub cones: Vec<ConeSpec>,
}

impl FanSpec {
    pub fn to_cones(&self) -> Result<Vec<MarkedCone>> {
        self.cones.iter().map(ConeSpec::to_cone).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub elements: Vec<IntMatrix>,
}

impl GroupSpec {
    pub fn to_elements(&self) -> Result<Vec<GroupElement>> {
        self.elements
            .iter()
            .map(|m| GroupElement::new(to_rows(m)))
            .collect()
    }
}

pub fn parse_cone(text: &str) -> Result<MarkedCone> {
    serde_json::from_str::<ConeSpec>(text)?.to_cone()
}

pub fn parse_fan(text: &str) -> Result<Vec<MarkedCone>> {
    serde_json::from_str::<FanSpec>(text)?.to_cones()
}

pub fn parse_group(text: &str) -> Result<Vec<GroupElement>> {
    serde_json::from_str::<GroupSpec>(text)?.to_elements()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;

    #[test]
    fn cone_roundtrip() {
        let c = catalog_get("principal-g2").unwrap().cone;
        let text = serde_json::to_string(&ConeSpec::from_cone(&c)).unwrap();
        assert_eq!(
            text,
            r#"{"g":2,"scale":1,"generators":[[[1,0],[0,0]],[[0,0],[0,1]],[[1,-1],[-1,1]]],"labels":["z11","z22","z12"]}"#
        );
        assert_eq!(parse_cone(&text).unwrap(), c);
    }

    #[test]
    fn big_integers_as_strings() {
        let big = BigInt::from(1u64 << 60);
        let s = serde_json::to_string(&JsonInt(big.clone())).unwrap();
        assert_eq!(s, "\"1152921504606846976\"");
        assert_eq!(serde_json::from_str::<JsonInt>(&s).unwrap().0, big);
        assert_eq!(serde_json::to_string(&JsonInt(BigInt::from(SAFE))).unwrap(), "9007199254740992");
        assert_eq!(serde_json::from_str::<JsonInt>("-3").unwrap().0, BigInt::from(-3));
        assert!(serde_json::from_str::<JsonInt>("\"x1\"").is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_cone("{"), Err(Error::Json(_))));
        assert!(matches!(
            parse_cone(r#"{"g":2,"generators":[[[1,0]]]}"#),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            parse_cone(r#"{"g":1,"generators":[[[-1]]]}"#),
            Err(Error::NotPositiveSemidefinite { index: 0 })
        ));
        assert!(parse_group(r#"{"elements":[[[2,0],[0,1]]]}"#).is_err());
        assert_eq!(parse_group(r#"{"elements":[[[0,1],[1,0]]]}"#).unwrap().len(), 1);
    }
}
