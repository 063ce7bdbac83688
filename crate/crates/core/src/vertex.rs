use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Vertex label. The derived order compares the variant first and then the
/// fields, which fixes the order of every vertex set in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    /// Vertex `pos` (1-based) of path `path` (1-based) in a join of paths.
    PathVertex { path: u32, pos: u32 },
    /// Apex inserted into the hole with the given key.
    HoleApex(u64),
    /// Apex used to close a ball into a sphere.
    ConeApex,
    Raw(u64),
}

impl VertexId {
    pub fn path(path: u32, pos: u32) -> Self {
        VertexId::PathVertex { path, pos }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::PathVertex { path, pos } => write!(f, "a:{path}:{pos}"),
            VertexId::HoleApex(k) => write!(f, "h:{k}"),
            VertexId::ConeApex => write!(f, "c"),
            VertexId::Raw(i) => write!(f, "r:{i}"),
        }
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InputParseError(format!("bad vertex label {s:?}"));
        let mut parts = s.split(':');
        let tag = parts.next().ok_or_else(bad)?;
        let mut num = || -> Result<u64, Error> {
            parts.next().ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())
        };
        let v = match tag {
            "a" => {
                let path = u32::try_from(num()?).map_err(|_| bad())?;
                let pos = u32::try_from(num()?).map_err(|_| bad())?;
                VertexId::PathVertex { path, pos }
            }
            "h" => VertexId::HoleApex(num()?),
            "c" => VertexId::ConeApex,
            "r" => VertexId::Raw(num()?),
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(v)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for v in [VertexId::path(2, 7), VertexId::HoleApex(12), VertexId::ConeApex, VertexId::Raw(0)] {
            assert_eq!(v.to_string().parse::<VertexId>().unwrap(), v);
        }
        assert_eq!(VertexId::path(1, 3).to_string(), "a:1:3");
        assert!("a:1".parse::<VertexId>().is_err());
        assert!("c:1".parse::<VertexId>().is_err());
        assert!("x".parse::<VertexId>().is_err());
    }

    #[test]
    fn order_is_discriminant_then_fields() {
        assert!(VertexId::path(1, 9) < VertexId::path(2, 1));
        assert!(VertexId::path(9, 9) < VertexId::HoleApex(0));
        assert!(VertexId::HoleApex(99) < VertexId::ConeApex);
        assert!(VertexId::ConeApex < VertexId::Raw(0));
    }
}
