use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// A simplex, stored as its strictly increasing vertex list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from any vertex list; rejects duplicates.
    pub fn new(mut verts: Vec<VertexId>) -> Result<Self> {
        verts.sort_unstable();
        if verts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateInput(format!("repeated vertex in {verts:?}")));
        }
        Ok(Simplex(verts))
    }

    /// Same as [`Simplex::new`] but panics on duplicates. Used where the
    /// caller constructs the vertex list itself.
    pub fn from_verts<I: IntoIterator<Item = VertexId>>(verts: I) -> Self {
        Self::new(verts.into_iter().collect()).expect("duplicate vertex")
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn verts(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension, `-1` for the empty simplex.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Simplex(out)
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains(v)).collect())
    }

    pub fn with(&self, v: VertexId) -> Simplex {
        self.union(&Simplex::vertex(v))
    }

    pub fn without(&self, v: &VertexId) -> Simplex {
        Simplex(self.0.iter().copied().filter(|w| w != v).collect())
    }

    /// The codimension-one faces, in the order of the dropped vertex.
    pub fn boundary_facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.0.iter().map(move |v| self.without(v))
    }

    /// All faces including the empty face and the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        assert!(self.0.len() < 32, "simplex too large for face enumeration");
        (0u32..(1u32 << self.0.len())).map(move |mask| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect(),
            )
        })
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let verts = Vec::<VertexId>::deserialize(d)?;
        Simplex::new(verts).map_err(serde::de::Error::custom)
    }
}

impl FromIterator<VertexId> for Simplex {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Simplex::from_verts(iter)
    }
}
