use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::vertex::VertexId;

/// Free sum of two simplices `f_part ⊕ g_part`. Its proper faces are the
/// sets `F' ∪ G'` with `F' ⊊ f_part` and `G' ⊊ g_part`; the two parts are
/// the minimal non-faces of its boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeSumCell {
    f_part: Simplex,
    g_part: Simplex,
}

impl FreeSumCell {
    pub fn new(f_part: Simplex, g_part: Simplex) -> Result<Self> {
        if !f_part.is_disjoint(&g_part) {
            return Err(Error::InvalidCell(format!("{f_part} and {g_part} intersect")));
        }
        if f_part.len() < 2 || g_part.len() < 2 {
            return Err(Error::InvalidCell(format!("summands {f_part}, {g_part} must both have dimension >= 1")));
        }
        Ok(FreeSumCell { f_part, g_part })
    }

    pub fn f_part(&self) -> &Simplex {
        &self.f_part
    }

    pub fn g_part(&self) -> &Simplex {
        &self.g_part
    }

    pub fn vertices(&self) -> Simplex {
        self.f_part.union(&self.g_part)
    }

    pub fn dim(&self) -> isize {
        (self.f_part.len() + self.g_part.len()) as isize - 2
    }

    /// `{|f|, |g|} = {2, 3}`: a triangular bipyramid.
    pub fn is_bipyramid(&self) -> bool {
        let mut s = [self.f_part.len(), self.g_part.len()];
        s.sort_unstable();
        s == [2, 3]
    }

    /// Whether the vertex set `w` spans a face of the cell (the cell itself
    /// counts).
    pub fn is_face(&self, w: &Simplex) -> bool {
        let all = self.vertices();
        if !w.is_subset(&all) {
            return false;
        }
        *w == all || (!self.f_part.is_subset(w) && !self.g_part.is_subset(w))
    }

    /// Facets of the boundary, `(f - x) ∪ (g - y)`.
    pub fn boundary_facets(&self) -> Vec<Simplex> {
        let mut out = Vec::with_capacity(self.f_part.len() * self.g_part.len());
        for fx in self.f_part.boundary_facets() {
            for gy in self.g_part.boundary_facets() {
                out.push(fx.union(&gy));
            }
        }
        out.sort();
        out
    }

    /// Nonempty proper faces.
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for fs in self.f_part.faces() {
            if fs.len() == self.f_part.len() {
                continue;
            }
            for gs in self.g_part.faces() {
                if gs.len() == self.g_part.len() || (fs.is_empty() && gs.is_empty()) {
                    continue;
                }
                out.push(fs.union(&gs));
            }
        }
        out
    }

    /// The two triangulations without new vertices. Choice `false` inserts
    /// `f_part` (`F * ∂G`, |g| simplices), choice `true` inserts `g_part`
    /// (`∂F * G`, |f| simplices).
    pub fn triangulate(&self, choice: bool) -> Vec<Simplex> {
        let (whole, split) = if choice { (&self.g_part, &self.f_part) } else { (&self.f_part, &self.g_part) };
        let mut out: Vec<Simplex> = split.boundary_facets().map(|s| s.union(whole)).collect();
        out.sort();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct FreeSumCellRepr {
    f: Simplex,
    g: Simplex,
}

impl Serialize for FreeSumCell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FreeSumCellRepr { f: self.f_part.clone(), g: self.g_part.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeSumCell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FreeSumCellRepr::deserialize(d)?;
        FreeSumCell::new(r.f, r.g).map_err(serde::de::Error::custom)
    }
}

/// Face counts by dimension, index 0 = vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub counts: Vec<usize>,
}

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.counts.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

/// A pure polyhedral complex whose cells are simplices and free sums of two
/// simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyComplex {
    simplex_cells: BTreeSet<Simplex>,
    free_cells: BTreeSet<FreeSumCell>,
    dim: isize,
}

impl PolyComplex {
    /// Builds the complex and checks dimensions and proper intersection.
    pub fn new(simplex_cells: BTreeSet<Simplex>, free_cells: BTreeSet<FreeSumCell>) -> Result<Self> {
        let pc = Self::new_unchecked(simplex_cells, free_cells)?;
        pc.check_proper_intersection()?;
        Ok(pc)
    }

    /// Builds the complex checking only that all cells share one dimension.
    pub fn new_unchecked(simplex_cells: BTreeSet<Simplex>, free_cells: BTreeSet<FreeSumCell>) -> Result<Self> {
        let dims: BTreeSet<isize> =
            simplex_cells.iter().map(Simplex::dim).chain(free_cells.iter().map(FreeSumCell::dim)).collect();
        if dims.len() != 1 {
            return Err(Error::DegenerateInput(format!("cells of dimensions {dims:?}")));
        }
        let dim = *dims.iter().next().unwrap();
        Ok(PolyComplex { simplex_cells, free_cells, dim })
    }

    pub fn from_simplicial(x: &SimplicialComplex) -> Self {
        PolyComplex { simplex_cells: x.facets().clone(), free_cells: BTreeSet::new(), dim: x.dim() }
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn simplex_cells(&self) -> &BTreeSet<Simplex> {
        &self.simplex_cells
    }

    pub fn free_cells(&self) -> &BTreeSet<FreeSumCell> {
        &self.free_cells
    }

    pub fn num_cells(&self) -> usize {
        self.simplex_cells.len() + self.free_cells.len()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.simplex_cells
            .iter()
            .flat_map(|s| s.verts().iter().copied())
            .chain(self.free_cells.iter().flat_map(|c| c.vertices().verts().to_vec()))
            .collect()
    }

    fn cell_vertex_sets(&self) -> Vec<(Simplex, Option<&FreeSumCell>)> {
        self.simplex_cells
            .iter()
            .map(|s| (s.clone(), None))
            .chain(self.free_cells.iter().map(|c| (c.vertices(), Some(c))))
            .collect()
    }

    /// Every pair of cells meets in a common face of both.
    pub fn check_proper_intersection(&self) -> Result<()> {
        let cells = self.cell_vertex_sets();
        let mut by_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, (vs, _)) in cells.iter().enumerate() {
            for v in vs.verts() {
                by_vertex.entry(*v).or_default().push(i);
            }
        }
        let mut seen = BTreeSet::new();
        for (vs, _) in &cells {
            if !seen.insert(vs.clone()) {
                return Err(Error::InvalidCell(format!("two cells on the vertex set {vs}")));
            }
        }
        let is_face = |cell: &(Simplex, Option<&FreeSumCell>), w: &Simplex| match cell.1 {
            Some(c) => c.is_face(w),
            None => w.is_subset(&cell.0),
        };
        for (i, cell) in cells.iter().enumerate() {
            if cell.1.is_none() {
                continue;
            }
            let mut nbrs: BTreeSet<usize> = BTreeSet::new();
            for v in cell.0.verts() {
                nbrs.extend(by_vertex[v].iter().copied());
            }
            for j in nbrs {
                if j == i {
                    continue;
                }
                let w = cell.0.intersection(&cells[j].0);
                if !is_face(cell, &w) || !is_face(&cells[j], &w) {
                    return Err(Error::InvalidCell(format!(
                        "cells {} and {} meet in {w}, which is not a common face",
                        cell.0, cells[j].0
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn f_vector(&self) -> FVector {
        let mut faces: BTreeSet<Simplex> = BTreeSet::new();
        for s in &self.simplex_cells {
            faces.extend(s.faces().filter(|f| !f.is_empty() && f.len() < s.len()));
        }
        for c in &self.free_cells {
            faces.extend(c.proper_faces());
        }
        let top = self.dim.max(0) as usize;
        let mut counts = vec![0usize; top + 1];
        for f in &faces {
            counts[f.dim() as usize] += 1;
        }
        counts[top] += self.num_cells();
        FVector { counts }
    }

    /// Codimension-one faces lying in exactly one cell.
    pub fn boundary(&self) -> Result<SimplicialComplex> {
        let mut deg: BTreeMap<Simplex, usize> = BTreeMap::new();
        for s in &self.simplex_cells {
            for r in s.boundary_facets() {
                *deg.entry(r).or_insert(0) += 1;
            }
        }
        for c in &self.free_cells {
            for r in c.boundary_facets() {
                *deg.entry(r).or_insert(0) += 1;
            }
        }
        let mut out = Vec::new();
        for (r, d) in deg {
            match d {
                1 => out.push(r),
                2 => {}
                _ => return Err(Error::NotPseudomanifold(r.to_string())),
            }
        }
        if out.is_empty() {
            Ok(SimplicialComplex::void(self.dim - 1))
        } else {
            SimplicialComplex::new(out)
        }
    }

    /// Adds simplicial cells (e.g. a closing cone).
    pub fn with_simplices<I: IntoIterator<Item = Simplex>>(&self, extra: I) -> Result<Self> {
        let mut s = self.simplex_cells.clone();
        s.extend(extra);
        Self::new_unchecked(s, self.free_cells.clone())
    }
}
