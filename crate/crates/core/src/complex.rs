use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::vertex::VertexId;

/// A pure simplicial complex given by its facets. Faces are derived from
/// the facets on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    facets: BTreeSet<Simplex>,
    dim: isize,
}

impl SimplicialComplex {
    /// Builds a pure complex. An empty facet list is rejected; use
    /// [`SimplicialComplex::void`] for the complex with no faces at all.
    pub fn new<I: IntoIterator<Item = Simplex>>(facets: I) -> Result<Self> {
        let facets: BTreeSet<Simplex> = facets.into_iter().collect();
        let first = facets
            .iter()
            .next()
            .ok_or_else(|| Error::DegenerateInput("complex without facets".into()))?;
        let dim = first.dim();
        if let Some(bad) = facets.iter().find(|f| f.dim() != dim) {
            return Err(Error::DegenerateInput(format!(
                "complex is not pure: {bad} has dimension {} instead of {dim}",
                bad.dim()
            )));
        }
        Ok(SimplicialComplex { facets, dim })
    }

    /// The complex whose only facet is the empty simplex; the identity for
    /// [`join`].
    pub fn unit() -> Self {
        SimplicialComplex { facets: BTreeSet::from([Simplex::empty()]), dim: -1 }
    }

    /// The complex with no faces, tagged with the dimension it would have had.
    /// Returned as the boundary of closed complexes.
    pub fn void(dim: isize) -> Self {
        SimplicialComplex { facets: BTreeSet::new(), dim }
    }

    pub fn simplex(s: Simplex) -> Self {
        let dim = s.dim();
        SimplicialComplex { facets: BTreeSet::from([s]), dim }
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn facets(&self) -> &BTreeSet<Simplex> {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn into_facets(self) -> BTreeSet<Simplex> {
        self.facets
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.facets.iter().flat_map(|f| f.verts().iter().copied()).collect()
    }

    pub fn contains_face(&self, f: &Simplex) -> bool {
        self.facets.iter().any(|t| f.is_subset(t))
    }

    /// All faces of dimension `k`.
    pub fn faces_of_dim(&self, k: isize) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for s in f.faces() {
                if s.dim() == k {
                    out.insert(s);
                }
            }
        }
        out
    }

    /// Face counts by dimension, index 0 = vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.dim < 0 {
            return Vec::new();
        }
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for f in &self.facets {
            all.extend(f.faces().filter(|s| !s.is_empty()));
        }
        let mut counts = vec![0; self.dim as usize + 1];
        for s in &all {
            counts[s.dim() as usize] += 1;
        }
        counts
    }

    /// Number of facets containing each ridge.
    pub fn ridge_degrees(&self) -> BTreeMap<Simplex, usize> {
        let mut deg = BTreeMap::new();
        for f in &self.facets {
            for r in f.boundary_facets() {
                *deg.entry(r).or_insert(0) += 1;
            }
        }
        deg
    }

    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Result<Self> {
        let facets: Result<Vec<Simplex>> =
            self.facets.iter().map(|f| Simplex::new(f.verts().iter().map(|v| map(*v)).collect())).collect();
        if self.is_void() {
            return Ok(self.clone());
        }
        SimplicialComplex::new(facets?)
    }

    /// Subcomplex generated by the given facets of `self`.
    pub fn restrict<'a, I: IntoIterator<Item = &'a Simplex>>(&self, facets: I) -> Result<Self> {
        let mut out = Vec::new();
        for f in facets {
            if !self.facets.contains(f) {
                return Err(Error::FaceNotFound(f.to_string()));
            }
            out.push(f.clone());
        }
        SimplicialComplex::new(out)
    }
}

/// `X * Y = { F ∪ G }` for vertex-disjoint complexes.
pub fn join(x: &SimplicialComplex, y: &SimplicialComplex) -> Result<SimplicialComplex> {
    let vx = x.vertices();
    if let Some(v) = y.vertices().iter().find(|v| vx.contains(v)) {
        return Err(Error::DisjointnessViolation(format!("vertex {v} in both factors")));
    }
    if x.is_void() || y.is_void() {
        return Err(Error::DegenerateInput("join with a complex without faces".into()));
    }
    SimplicialComplex::new(x.facets.iter().flat_map(|f| y.facets.iter().map(move |g| f.union(g))))
}

/// `lk(F) = { T : T ∩ F = ∅, T ∪ F ∈ X }`.
pub fn link(x: &SimplicialComplex, f: &Simplex) -> Result<SimplicialComplex> {
    let facets: Vec<Simplex> = x.facets.iter().filter(|t| f.is_subset(t)).map(|t| t.difference(f)).collect();
    if facets.is_empty() {
        return Err(Error::FaceNotFound(f.to_string()));
    }
    SimplicialComplex::new(facets)
}

/// Closed star: the subcomplex generated by the facets containing `f`.
pub fn star(x: &SimplicialComplex, f: &Simplex) -> Result<SimplicialComplex> {
    let facets: Vec<Simplex> = x.facets.iter().filter(|t| f.is_subset(t)).cloned().collect();
    if facets.is_empty() {
        return Err(Error::FaceNotFound(f.to_string()));
    }
    SimplicialComplex::new(facets)
}

/// Ridges lying in exactly one facet. Void when `x` is closed.
pub fn boundary_complex(x: &SimplicialComplex) -> Result<SimplicialComplex> {
    let mut out = Vec::new();
    for (r, d) in x.ridge_degrees() {
        match d {
            1 => out.push(r),
            2 => {}
            _ => return Err(Error::NotPseudomanifold(r.to_string())),
        }
    }
    if out.is_empty() {
        Ok(SimplicialComplex::void(x.dim() - 1))
    } else {
        SimplicialComplex::new(out)
    }
}

pub fn cone(x: &SimplicialComplex, apex: VertexId) -> Result<SimplicialComplex> {
    if x.is_void() {
        return Err(Error::DegenerateInput("cone over a complex without faces".into()));
    }
    if x.facets.iter().any(|f| f.contains(&apex)) {
        return Err(Error::DisjointnessViolation(format!("apex {apex} already in complex")));
    }
    SimplicialComplex::new(x.facets.iter().map(|f| f.with(apex)))
}
