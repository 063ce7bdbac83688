//! Carving balls out of a simplicial complex and filling them with cones
//! whose cells are free sums of two simplices.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::cell::{FreeSumCell, PolyComplex};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::topology::{certify, TopologyCertificate};
use crate::vertex::VertexId;

/// A pure full-dimensional subcomplex of `host`, expected to be a ball.
#[derive(Clone, Debug)]
pub struct BallInComplex {
    host: Arc<SimplicialComplex>,
    ball_facets: BTreeSet<Simplex>,
    boundary: BTreeSet<Simplex>,
}

impl BallInComplex {
    pub fn new(host: Arc<SimplicialComplex>, ball_facets: BTreeSet<Simplex>) -> Result<Self> {
        if let Some(f) = ball_facets.iter().find(|f| !host.facets().contains(*f)) {
            return Err(Error::FaceNotFound(format!("{f} is not a facet of the host")));
        }
        match ball_facets.len() {
            0 => return Err(Error::DegenerateInput("empty ball".into())),
            1 => return Err(Error::SingleSimplexBall(ball_facets.iter().next().unwrap().to_string())),
            _ => {}
        }
        let mut deg: BTreeMap<Simplex, usize> = BTreeMap::new();
        for f in &ball_facets {
            for r in f.boundary_facets() {
                *deg.entry(r).or_insert(0) += 1;
            }
        }
        let mut boundary = BTreeSet::new();
        for (r, d) in deg {
            match d {
                1 => {
                    boundary.insert(r);
                }
                2 => {}
                _ => return Err(Error::NotPseudomanifold(r.to_string())),
            }
        }
        Ok(BallInComplex { host, ball_facets, boundary })
    }

    pub fn host(&self) -> &SimplicialComplex {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<SimplicialComplex> {
        &self.host
    }

    pub fn facets(&self) -> &BTreeSet<Simplex> {
        &self.ball_facets
    }

    /// Facets of `∂B`.
    pub fn boundary_ridges(&self) -> &BTreeSet<Simplex> {
        &self.boundary
    }

    pub fn as_complex(&self) -> SimplicialComplex {
        SimplicialComplex::new(self.ball_facets.iter().cloned()).expect("ball facets are pure")
    }

    pub fn certify(&self) -> TopologyCertificate {
        certify(&self.as_complex())
    }

    /// Whether `f` lies in `∂B`.
    pub fn is_boundary_face(&self, f: &Simplex) -> bool {
        self.boundary.iter().any(|r| f.is_subset(r))
    }

    fn facets_on_boundary(&self, sigma: &Simplex) -> Result<Vec<Simplex>> {
        if !self.ball_facets.contains(sigma) {
            return Err(Error::FaceNotFound(format!("{sigma} is not in the ball")));
        }
        Ok(sigma.boundary_facets().filter(|r| self.boundary.contains(r)).collect())
    }
}

/// `D_σ`: the ridges of `sigma` that lie on `∂B`. Void when there are none.
pub fn boundary_restriction(b: &BallInComplex, sigma: &Simplex) -> Result<SimplicialComplex> {
    let d = b.facets_on_boundary(sigma)?;
    if d.is_empty() {
        Ok(SimplicialComplex::void(sigma.dim() - 1))
    } else {
        SimplicialComplex::new(d)
    }
}

/// `F_σ`: the vertices of `sigma` opposite its boundary ridges; the unique
/// minimal non-face of `D_σ`.
pub fn missing_face(b: &BallInComplex, sigma: &Simplex) -> Result<Simplex> {
    let d = b.facets_on_boundary(sigma)?;
    if d.is_empty() {
        return Err(Error::NoBoundaryContact(sigma.to_string()));
    }
    if d.len() == sigma.len() {
        return Err(Error::SingleSimplexBall(sigma.to_string()));
    }
    Ok(sigma.verts().iter().copied().filter(|v| d.contains(&sigma.without(v))).collect())
}

/// Full-dimensional simplices of a ball, intended to be filled with free
/// sum cells.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    pub ball: BallInComplex,
    pub members: BTreeSet<Simplex>,
}

impl CompatibleFamily {
    pub fn new(ball: BallInComplex, members: BTreeSet<Simplex>) -> Result<Self> {
        for m in &members {
            if b_missing(&ball, m).is_none() {
                return Err(Error::NoBoundaryContact(m.to_string()));
            }
        }
        Ok(CompatibleFamily { ball, members })
    }

    /// `(σ, F_σ)` for each member.
    pub fn missing_faces(&self) -> Result<Vec<(Simplex, Simplex)>> {
        self.members.iter().map(|s| Ok((s.clone(), missing_face(&self.ball, s)?))).collect()
    }
}

fn b_missing(b: &BallInComplex, s: &Simplex) -> Option<Simplex> {
    missing_face(b, s).ok()
}

/// Missing faces pairwise distinct and none contained in `∂B`.
pub fn is_compatible(fam: &CompatibleFamily) -> bool {
    incompatibility(fam).is_none()
}

fn incompatibility(fam: &CompatibleFamily) -> Option<String> {
    let mut seen: HashSet<Simplex> = HashSet::new();
    for s in &fam.members {
        let f = match missing_face(&fam.ball, s) {
            Ok(f) => f,
            Err(e) => return Some(e.to_string()),
        };
        if fam.ball.is_boundary_face(&f) {
            return Some(format!("missing face {f} of {s} lies on the ball boundary"));
        }
        if !seen.insert(f.clone()) {
            return Some(format!("missing face {f} repeated"));
        }
    }
    None
}

/// Greedy maximal compatible subfamily of `candidates`, scanned in
/// lexicographic order. Candidates whose missing face is missing, lies on
/// the boundary, is a single vertex, or was already taken are rejected.
pub fn greedy_compatible_subfamily(
    ball: &BallInComplex,
    candidates: &BTreeSet<Simplex>,
) -> (BTreeSet<Simplex>, BTreeSet<Simplex>) {
    let mut taken = BTreeSet::new();
    let mut rejected = BTreeSet::new();
    let mut used: HashSet<Simplex> = HashSet::new();
    for s in candidates {
        match missing_face(ball, s) {
            Ok(f) if f.len() >= 2 && !ball.is_boundary_face(&f) && !used.contains(&f) => {
                used.insert(f);
                taken.insert(s.clone());
            }
            _ => {
                rejected.insert(s.clone());
            }
        }
    }
    (taken, rejected)
}

/// S-filling of a single ball: each member `σ` becomes the cell
/// `F_σ ⊕ (G_σ ∪ {apex})`, and each boundary ridge not used by a member is
/// coned to `apex`.
pub fn s_fill(fam: &CompatibleFamily, apex: VertexId) -> Result<(PolyComplex, Vec<FreeSumCell>)> {
    if let Some(why) = incompatibility(fam) {
        return Err(Error::IncompatibleFamily(why));
    }
    if fam.ball.host().facets().iter().any(|f| f.contains(&apex)) {
        return Err(Error::DisjointnessViolation(format!("apex {apex} already in the host")));
    }
    let (cells, simplices) = fill_cells(fam, apex)?;
    let pc = PolyComplex::new(simplices, cells.iter().cloned().collect())?;
    Ok((pc, cells))
}

fn fill_cells(fam: &CompatibleFamily, apex: VertexId) -> Result<(Vec<FreeSumCell>, BTreeSet<Simplex>)> {
    let mut used: HashSet<Simplex> = HashSet::new();
    let mut cells = Vec::with_capacity(fam.members.len());
    for s in &fam.members {
        let f = missing_face(&fam.ball, s)?;
        let g = s.difference(&f).with(apex);
        for r in fam.ball.facets_on_boundary(s)? {
            used.insert(r);
        }
        cells.push(FreeSumCell::new(f, g)?);
    }
    cells.sort();
    let simplices = fam.ball.boundary.iter().filter(|r| !used.contains(*r)).map(|r| r.with(apex)).collect();
    Ok((cells, simplices))
}

/// Result of carving and filling several holes.
#[derive(Clone, Debug)]
pub struct FillManifest {
    pub result: PolyComplex,
    pub free_cells_by_ball: BTreeMap<u64, Vec<FreeSumCell>>,
    pub apex_of_ball: BTreeMap<u64, VertexId>,
}

impl FillManifest {
    /// Free cells in canonical order: hole key, then `f_part`.
    pub fn free_cells(&self) -> Vec<&FreeSumCell> {
        self.free_cells_by_ball.values().flatten().collect()
    }

    pub fn num_free_cells(&self) -> usize {
        self.free_cells_by_ball.values().map(Vec::len).sum()
    }

    /// Cones the boundary of the result to [`VertexId::ConeApex`].
    pub fn close_with_cone(&self) -> Result<FillManifest> {
        let bd = self.result.boundary()?;
        if bd.is_void() {
            return Err(Error::DegenerateInput("complex is already closed".into()));
        }
        if self.result.vertices().contains(&VertexId::ConeApex) {
            return Err(Error::DisjointnessViolation("cone apex already present".into()));
        }
        let result = self.result.with_simplices(bd.facets().iter().map(|r| r.with(VertexId::ConeApex)))?;
        Ok(FillManifest { result, ..self.clone() })
    }
}

/// Fills every hole of `k` at once. Holes are keyed; the apex of hole `key`
/// is `HoleApex(key)`.
pub fn carve_and_fill(k: &SimplicialComplex, holes: &[(u64, CompatibleFamily)]) -> Result<FillManifest> {
    let mut owner: BTreeMap<&Simplex, u64> = BTreeMap::new();
    let mut keys = BTreeSet::new();
    let host_verts = k.vertices();
    for (key, fam) in holes {
        if !keys.insert(*key) {
            return Err(Error::DegenerateInput(format!("hole key {key} repeated")));
        }
        if host_verts.contains(&VertexId::HoleApex(*key)) {
            return Err(Error::DisjointnessViolation(format!("apex h:{key} already in the complex")));
        }
        for f in fam.ball.facets() {
            if !k.facets().contains(f) {
                return Err(Error::FaceNotFound(format!("{f} is not a facet of the complex")));
            }
            if owner.insert(f, *key).is_some() {
                return Err(Error::BallOverlap(f.to_string()));
            }
        }
        if let Some(why) = incompatibility(fam) {
            return Err(Error::IncompatibleFamily(format!("hole {key}: {why}")));
        }
    }
    let fills: Vec<Result<(u64, Vec<FreeSumCell>, BTreeSet<Simplex>)>> = holes
        .par_iter()
        .map(|(key, fam)| {
            let (cells, simplices) = fill_cells(fam, VertexId::HoleApex(*key))?;
            Ok((*key, cells, simplices))
        })
        .collect();
    let mut simplices: BTreeSet<Simplex> = k.facets().iter().filter(|f| !owner.contains_key(f)).cloned().collect();
    let mut free = BTreeSet::new();
    let mut free_cells_by_ball = BTreeMap::new();
    let mut apex_of_ball = BTreeMap::new();
    for fill in fills {
        let (key, cells, s) = fill?;
        simplices.extend(s);
        free.extend(cells.iter().cloned());
        free_cells_by_ball.insert(key, cells);
        apex_of_ball.insert(key, VertexId::HoleApex(key));
    }
    let result = PolyComplex::new(simplices, free)?;
    Ok(FillManifest { result, free_cells_by_ball, apex_of_ball })
}

/// The two triangulations of a free sum cell; see [`FreeSumCell::triangulate`].
pub fn triangulate_cell(c: &FreeSumCell, choice: bool) -> Vec<Simplex> {
    c.triangulate(choice)
}

/// Replaces each free cell by the triangulation chosen by its bit.
pub fn realize(m: &FillManifest, choices: &[bool]) -> Result<SimplicialComplex> {
    let cells = m.free_cells();
    if cells.len() != choices.len() {
        return Err(Error::ChoiceLengthMismatch { expected: cells.len(), got: choices.len() });
    }
    let mut facets: BTreeSet<Simplex> = m.result.simplex_cells().clone();
    for (c, &bit) in cells.iter().zip(choices) {
        facets.extend(c.triangulate(bit));
    }
    SimplicialComplex::new(facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_complex, join};
    use crate::topology::betti_gf2;

    fn r(xs: &[u64]) -> Simplex {
        xs.iter().map(|&x| VertexId::Raw(x)).collect()
    }
    fn a(i: u32) -> VertexId {
        VertexId::path(1, i)
    }
    fn b(j: u32) -> VertexId {
        VertexId::path(2, j)
    }
    fn path(p: u32, n: u32) -> SimplicialComplex {
        SimplicialComplex::new((1..n).map(|i| Simplex::from_verts([VertexId::path(p, i), VertexId::path(p, i + 1)])))
            .unwrap()
    }
    fn whole(k: &SimplicialComplex) -> BallInComplex {
        BallInComplex::new(Arc::new(k.clone()), k.facets().clone()).unwrap()
    }

    fn glued() -> BallInComplex {
        let k = SimplicialComplex::new([r(&[1, 2, 3, 4]), r(&[2, 3, 4, 5])]).unwrap();
        whole(&k)
    }

    #[test]
    fn restriction_and_missing_face_in_grid() {
        let k = join(&path(1, 3), &path(2, 3)).unwrap();
        let ball = whole(&k);
        let corner = Simplex::from_verts([a(1), a(2), b(1), b(2)]);
        let d = boundary_restriction(&ball, &corner).unwrap();
        assert_eq!(d.num_facets(), 2);
        let f = missing_face(&ball, &corner).unwrap();
        assert_eq!(f, Simplex::from_verts([a(2), b(2)]));
    }

    #[test]
    fn interior_simplex_has_empty_restriction() {
        let k = join(&path(1, 4), &path(2, 4)).unwrap();
        let ball = whole(&k);
        let mid = Simplex::from_verts([a(2), a(3), b(2), b(3)]);
        assert!(boundary_restriction(&ball, &mid).unwrap().is_void());
        assert!(matches!(missing_face(&ball, &mid), Err(Error::NoBoundaryContact(_))));
    }

    #[test]
    fn glued_tetrahedra() {
        let ball = glued();
        for s in [r(&[1, 2, 3, 4]), r(&[2, 3, 4, 5])] {
            assert_eq!(boundary_restriction(&ball, &s).unwrap().num_facets(), 3);
            assert_eq!(missing_face(&ball, &s).unwrap(), r(&[2, 3, 4]));
        }
        let fam = CompatibleFamily { ball: ball.clone(), members: ball.facets().clone() };
        assert!(!is_compatible(&fam));
        assert!(matches!(s_fill(&fam, VertexId::ConeApex), Err(Error::IncompatibleFamily(_))));
        let single = CompatibleFamily { ball: ball.clone(), members: BTreeSet::from([r(&[1, 2, 3, 4])]) };
        assert!(is_compatible(&single));
        let (pc, cells) = s_fill(&single, VertexId::ConeApex).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].f_part(), &r(&[2, 3, 4]));
        assert_eq!(pc.boundary().unwrap().facets(), ball.boundary_ridges());
    }

    #[test]
    fn single_simplex_ball_rejected() {
        let k = SimplicialComplex::simplex(r(&[1, 2, 3]));
        assert!(matches!(
            BallInComplex::new(Arc::new(k.clone()), k.facets().clone()),
            Err(Error::SingleSimplexBall(_))
        ));
    }

    #[test]
    fn empty_family_fills_with_a_cone() {
        let k = join(&path(1, 4), &path(2, 4)).unwrap();
        let ball = whole(&k);
        let fam = CompatibleFamily { ball: ball.clone(), members: BTreeSet::new() };
        assert!(is_compatible(&fam));
        let (pc, cells) = s_fill(&fam, VertexId::ConeApex).unwrap();
        assert!(cells.is_empty());
        assert_eq!(pc.simplex_cells().len(), ball.boundary_ridges().len());
        let bd = boundary_complex(&k).unwrap();
        assert_eq!(pc.boundary().unwrap(), bd);
        assert!(matches!(s_fill(&fam, a(1)), Err(Error::DisjointnessViolation(_))));
    }

    #[test]
    fn realize_and_flip() {
        let k = join(&path(1, 4), &path(2, 4)).unwrap();
        let ball = whole(&k);
        let corners: BTreeSet<Simplex> = [
            Simplex::from_verts([a(1), a(2), b(1), b(2)]),
            Simplex::from_verts([a(3), a(4), b(3), b(4)]),
        ]
        .into();
        let fam = CompatibleFamily::new(ball, corners).unwrap();
        let m = carve_and_fill(&k, &[(7, fam)]).unwrap();
        assert_eq!(m.num_free_cells(), 2);
        let t00 = realize(&m, &[false, false]).unwrap();
        let t01 = realize(&m, &[false, true]).unwrap();
        assert_ne!(t00, t01);
        let sym: BTreeSet<_> = t00.facets().symmetric_difference(t01.facets()).collect();
        assert_eq!(sym.len(), 5);
        assert_eq!(betti_gf2(&t00), betti_gf2(&k));
        assert!(crate::topology::certify(&t01).is_ball(3));
        assert!(matches!(realize(&m, &[true]), Err(Error::ChoiceLengthMismatch { expected: 2, got: 1 })));
        let none = carve_and_fill(&k, &[]).unwrap();
        assert_eq!(realize(&none, &[]).unwrap(), k);
    }

    #[test]
    fn overlapping_balls_rejected() {
        let k = join(&path(1, 4), &path(2, 4)).unwrap();
        let fam = CompatibleFamily { ball: whole(&k), members: BTreeSet::new() };
        assert!(matches!(carve_and_fill(&k, &[(1, fam.clone()), (2, fam)]), Err(Error::BallOverlap(_))));
    }
}
