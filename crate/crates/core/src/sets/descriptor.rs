//! JSON set descriptors.
//!
//! ```json
//! {"type":"intervals","items":[["-inf",-1.0],[1.0,"inf"]]}
//! {"type":"halfspace","omega":[0.0,1.0],"s":-0.5}
//! {"type":"slab","dim":3,"profile":[[0.2,"inf"]]}
//! {"type":"ball","dim":2,"radius":1.0}
//! ```

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CenteredBall, GaussianSet, HalfSpace, IntervalUnion1D, SlabSet};
use crate::error::{Error, Result};

/// Extended-real endpoint; infinities travel as the strings `"inf"`/`"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint(pub f64);

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            ser.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            ser.serialize_str("-inf")
        } else {
            ser.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct EndpointVisitor;

        impl Visitor<'_> for EndpointVisitor {
            type Value = Endpoint;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Endpoint, E> {
                match v {
                    "inf" => Ok(Endpoint(f64::INFINITY)),
                    "-inf" => Ok(Endpoint(f64::NEG_INFINITY)),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        de.deserialize_any(EndpointVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetDescriptor {
    Intervals { items: Vec<[Endpoint; 2]> },
    Halfspace { omega: Vec<f64>, s: f64 },
    Slab { dim: usize, profile: Vec<[Endpoint; 2]> },
    Ball { dim: usize, radius: f64 },
}

fn to_pairs(u: &IntervalUnion1D) -> Vec<[Endpoint; 2]> {
    u.intervals().iter().map(|&(lo, hi)| [Endpoint(lo), Endpoint(hi)]).collect()
}

fn from_pairs(items: &[[Endpoint; 2]]) -> Result<IntervalUnion1D> {
    IntervalUnion1D::normalize(items.iter().map(|[lo, hi]| (lo.0, hi.0)))
}

impl From<&GaussianSet> for SetDescriptor {
    fn from(set: &GaussianSet) -> Self {
        match set {
            GaussianSet::Intervals(u) => SetDescriptor::Intervals { items: to_pairs(u) },
            GaussianSet::HalfSpace(h) => SetDescriptor::Halfspace { omega: h.omega().to_vec(), s: h.level() },
            GaussianSet::Slab(s) => SetDescriptor::Slab { dim: s.dim(), profile: to_pairs(s.profile()) },
            GaussianSet::Ball(b) => SetDescriptor::Ball { dim: b.dim(), radius: b.radius() },
        }
    }
}

impl TryFrom<SetDescriptor> for GaussianSet {
    type Error = Error;

    fn try_from(desc: SetDescriptor) -> Result<Self> {
        Ok(match desc {
            SetDescriptor::Intervals { items } => from_pairs(&items)?.into(),
            SetDescriptor::Halfspace { omega, s } => HalfSpace::new(omega, s)?.into(),
            SetDescriptor::Slab { dim, profile } => SlabSet::new(dim, from_pairs(&profile)?)?.into(),
            SetDescriptor::Ball { dim, radius } => CenteredBall::new(dim, radius)?.into(),
        })
    }
}

impl GaussianSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let desc: SetDescriptor = serde_json::from_str(text)?;
        desc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SetDescriptor::from(self)).expect("descriptor serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_variant() {
        let u = GaussianSet::from_json(r#"{"type":"intervals","items":[["-inf",-1],[1,"inf"]]}"#).unwrap();
        assert_eq!(u, IntervalUnion1D::normalize([(f64::NEG_INFINITY, -1.0), (1.0, f64::INFINITY)]).unwrap().into());
        let h = GaussianSet::from_json(r#"{"type":"halfspace","omega":[1],"s":-1}"#).unwrap();
        assert_eq!(h, HalfSpace::new(vec![1.0], -1.0).unwrap().into());
        let s = GaussianSet::from_json(r#"{"type":"slab","dim":3,"profile":[[0.5,"inf"]]}"#).unwrap();
        assert_eq!(s.dim(), 3);
        let b = GaussianSet::from_json(r#"{"type":"ball","dim":4,"radius":2.5}"#).unwrap();
        assert_eq!(b, CenteredBall::new(4, 2.5).unwrap().into());
    }

    #[test]
    fn exact_text_form() {
        let u: GaussianSet = IntervalUnion1D::normalize([(f64::NEG_INFINITY, -0.5), (1.25, 2.0)]).unwrap().into();
        assert_eq!(u.to_json(), r#"{"type":"intervals","items":[["-inf",-0.5],[1.25,2.0]]}"#);
        let b: GaussianSet = CenteredBall::new(2, 1.0).unwrap().into();
        assert_eq!(b.to_json(), r#"{"type":"ball","dim":2,"radius":1.0}"#);
    }

    #[test]
    fn round_trips() {
        let sets: Vec<GaussianSet> = vec![
            IntervalUnion1D::normalize([(-3.0, -1.0), (0.5, f64::INFINITY)]).unwrap().into(),
            HalfSpace::new(vec![0.6, -0.8], 0.25).unwrap().into(),
            SlabSet::new(2, IntervalUnion1D::lower_half_line(0.1)).unwrap().into(),
        ];
        for set in sets {
            assert_eq!(GaussianSet::from_json(&set.to_json()).unwrap(), set);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(GaussianSet::from_json(r#"{"type":"intervals","items":[["inf",0]]}"#).is_err());
        assert!(GaussianSet::from_json(r#"{"type":"intervals","items":[["infinity",0]]}"#).is_err());
        assert!(GaussianSet::from_json(r#"{"type":"cube","side":1}"#).is_err());
        assert!(GaussianSet::from_json(r#"{"type":"ball","dim":2,"radius":-1}"#).is_err());
        assert!(GaussianSet::from_json(r#"{"type":"halfspace","omega":[1,1],"s":0}"#).is_err());
        assert!(GaussianSet::from_json("not json").is_err());
    }
}
