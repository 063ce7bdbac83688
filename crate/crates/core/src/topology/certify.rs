//! Sphere and ball certification: pseudomanifold structure, dual-graph
//! connectivity, GF(2) Betti numbers, and the same checks on every face link.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::homology::reduced_betti_indexed;
use crate::complex::SimplicialComplex;

/// Links are certified recursively only up to this dimension.
pub const MAX_LINK_RECURSION_DIM: isize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dim", rename_all = "lowercase")]
pub enum TopologyKind {
    Sphere(isize),
    Ball(isize),
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    /// Reduced Betti numbers over GF(2), dimensions `0..=dim`.
    pub betti: Vec<usize>,
    /// Every ridge lies in at most two facets.
    pub pseudomanifold: bool,
    /// Every ridge lies in exactly two facets.
    pub closed: bool,
    pub dual_graph_connected: bool,
    /// Whether face links were certified (skipped above the recursion cap).
    pub links_checked: bool,
    /// First failed check, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyCertificate {
    pub kind: TopologyKind,
    pub evidence: Evidence,
}

impl TopologyCertificate {
    pub fn is_sphere(&self, d: isize) -> bool {
        self.kind == TopologyKind::Sphere(d)
    }

    pub fn is_ball(&self, d: isize) -> bool {
        self.kind == TopologyKind::Ball(d)
    }
}

struct Global {
    betti: Vec<usize>,
    pseudomanifold: bool,
    closed: bool,
    dual_connected: bool,
    boundary: Vec<Vec<u32>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn global(facets: &[Vec<u32>]) -> Global {
    let mut ridges: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for drop in 0..f.len() {
            let r: Vec<u32> = f.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| *v).collect();
            ridges.entry(r).or_default().push(i);
        }
    }
    let mut parent: Vec<usize> = (0..facets.len()).collect();
    let mut pseudomanifold = true;
    let mut closed = true;
    let mut boundary = Vec::new();
    for (r, fs) in &ridges {
        match fs.len() {
            1 => {
                closed = false;
                boundary.push(r.clone());
            }
            2 => {
                let (a, b) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
                parent[a] = b;
            }
            _ => {
                pseudomanifold = false;
                closed = false;
            }
        }
    }
    let roots: HashSet<usize> = (0..facets.len()).map(|i| find(&mut parent, i)).collect();
    boundary.sort();
    Global {
        betti: reduced_betti_indexed(facets),
        pseudomanifold,
        closed,
        dual_connected: roots.len() <= 1,
        boundary,
    }
}

fn sphere_pattern(betti: &[usize]) -> bool {
    match betti.split_last() {
        Some((&last, rest)) => last == 1 && rest.iter().all(|&b| b == 0),
        None => false,
    }
}

/// Checks that do not recurse: pseudomanifold shape, connectivity, Betti
/// numbers. `Err` carries the reason.
fn local_check(facets: &[Vec<u32>], want_sphere: bool) -> Result<(), String> {
    let dim = facets[0].len() as isize - 1;
    if dim == 0 {
        return match (want_sphere, facets.len()) {
            (true, 2) | (false, 1) => Ok(()),
            (_, n) => Err(format!("0-dimensional link with {n} points")),
        };
    }
    let g = global(facets);
    if !g.pseudomanifold {
        return Err("ridge in three or more facets".into());
    }
    if want_sphere != g.closed {
        return Err(if want_sphere { "has boundary".into() } else { "no boundary".into() });
    }
    if !g.dual_connected {
        return Err("dual graph disconnected".into());
    }
    let ok = if want_sphere { sphere_pattern(&g.betti) } else { g.betti.iter().all(|&b| b == 0) };
    if !ok {
        return Err(format!("Betti numbers {:?}", g.betti));
    }
    Ok(())
}

struct Indexed {
    facets: Vec<Vec<u32>>,
    star: Vec<Vec<u32>>,
}

impl Indexed {
    fn new(facets: Vec<Vec<u32>>) -> Self {
        let nv = facets.iter().flatten().map(|&v| v as usize + 1).max().unwrap_or(0);
        let mut star = vec![Vec::new(); nv];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                star[v as usize].push(i as u32);
            }
        }
        Indexed { facets, star }
    }

    fn link(&self, face: &[u32]) -> Vec<Vec<u32>> {
        let base = face.iter().min_by_key(|&&v| self.star[v as usize].len()).unwrap();
        self.star[*base as usize]
            .iter()
            .map(|&i| &self.facets[i as usize])
            .filter(|f| face.iter().all(|v| f.binary_search(v).is_ok()))
            .map(|f| f.iter().copied().filter(|v| face.binary_search(v).is_err()).collect())
            .collect()
    }
}

fn all_faces(facets: &[Vec<u32>], max_len: usize) -> Vec<Vec<u32>> {
    let mut set: HashSet<Vec<u32>> = HashSet::new();
    for f in facets {
        let n = f.len();
        for mask in 1u32..(1u32 << n) {
            if (mask.count_ones() as usize) <= max_len {
                set.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect());
            }
        }
    }
    let mut v: Vec<Vec<u32>> = set.into_iter().collect();
    v.sort();
    v
}

fn certify_indexed(facets: Vec<Vec<u32>>) -> TopologyCertificate {
    let dim = facets[0].len() as isize - 1;
    let neither = |e: Evidence, why: String| TopologyCertificate {
        kind: TopologyKind::Neither,
        evidence: Evidence { failure: Some(why), ..e },
    };
    if dim <= 0 {
        let n = facets.len();
        let ev = Evidence {
            betti: reduced_betti_indexed(&facets),
            pseudomanifold: n <= 2,
            closed: n == 2,
            dual_graph_connected: true,
            links_checked: true,
            failure: None,
        };
        return match (dim, n) {
            (-1, _) => TopologyCertificate { kind: TopologyKind::Sphere(-1), evidence: ev },
            (_, 2) => TopologyCertificate { kind: TopologyKind::Sphere(0), evidence: ev },
            (_, 1) => TopologyCertificate { kind: TopologyKind::Ball(0), evidence: ev },
            _ => neither(ev, format!("{n} isolated points")),
        };
    }
    let g = global(&facets);
    let links_checked = dim <= MAX_LINK_RECURSION_DIM;
    let ev = Evidence {
        betti: g.betti.clone(),
        pseudomanifold: g.pseudomanifold,
        closed: g.closed,
        dual_graph_connected: g.dual_connected,
        links_checked,
        failure: None,
    };
    if !g.pseudomanifold {
        return neither(ev, "ridge in three or more facets".into());
    }
    if !g.dual_connected {
        return neither(ev, "dual graph disconnected".into());
    }
    let want_sphere = g.closed;
    if want_sphere && !sphere_pattern(&g.betti) {
        return neither(ev, format!("closed but Betti numbers {:?}", g.betti));
    }
    if !want_sphere {
        if g.betti.iter().any(|&b| b != 0) {
            return neither(ev, format!("has boundary but Betti numbers {:?}", g.betti));
        }
        let bd = certify_indexed(g.boundary.clone());
        if !bd.is_sphere(dim - 1) {
            return neither(ev, format!("boundary is not a sphere: {:?}", bd.evidence.failure));
        }
    }
    if links_checked {
        let boundary_faces: HashSet<Vec<u32>> = if want_sphere {
            HashSet::new()
        } else {
            all_faces(&g.boundary, usize::MAX).into_iter().collect()
        };
        let idx = Indexed::new(facets);
        let faces = all_faces(&idx.facets, (dim - 1) as usize);
        let failure = faces.par_iter().find_map_first(|f| {
            let link = idx.link(f);
            let sphere_link = !boundary_faces.contains(f);
            local_check(&link, sphere_link).err().map(|why| format!("link of face {f:?}: {why}"))
        });
        if let Some(why) = failure {
            return neither(ev, why);
        }
    }
    let kind = if want_sphere { TopologyKind::Sphere(dim) } else { TopologyKind::Ball(dim) };
    TopologyCertificate { kind, evidence: ev }
}

/// Classifies `x` as a sphere, a ball, or neither.
pub fn certify(x: &SimplicialComplex) -> TopologyCertificate {
    if x.is_void() {
        return TopologyCertificate {
            kind: TopologyKind::Neither,
            evidence: Evidence {
                betti: Vec::new(),
                pseudomanifold: true,
                closed: true,
                dual_graph_connected: true,
                links_checked: true,
                failure: Some("complex has no faces".into()),
            },
        };
    }
    let verts: Vec<_> = x.vertices().into_iter().collect();
    let facets: Vec<Vec<u32>> = x
        .facets()
        .iter()
        .map(|f| f.verts().iter().map(|v| verts.binary_search(v).unwrap() as u32).collect())
        .collect();
    certify_indexed(facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_complex, cone, join};
    use crate::cyclic::cyclic_polytope_facets;
    use crate::simplex::Simplex;
    use crate::vertex::VertexId;

    fn r(xs: &[u64]) -> Simplex {
        xs.iter().map(|&x| VertexId::Raw(x)).collect()
    }

    fn path(p: u32, n: u32) -> SimplicialComplex {
        SimplicialComplex::new((1..n).map(|i| Simplex::from_verts([VertexId::path(p, i), VertexId::path(p, i + 1)])))
            .unwrap()
    }

    #[test]
    fn simplex_boundaries_are_spheres() {
        for n in 2..7u64 {
            let s = SimplicialComplex::simplex(r(&(1..=n).collect::<Vec<_>>()));
            assert!(certify(&s).is_ball(n as isize - 1));
            let b = boundary_complex(&s).unwrap();
            assert!(certify(&b).is_sphere(n as isize - 2), "{n}");
        }
    }

    #[test]
    fn join_of_paths_is_ball() {
        let j = join(&path(1, 4), &path(2, 4)).unwrap();
        assert!(certify(&j).is_ball(3));
    }

    #[test]
    fn cyclic_polytopes_are_spheres() {
        for n in 5..=10 {
            assert!(certify(&cyclic_polytope_facets(n, 4).unwrap()).is_sphere(3));
        }
    }

    #[test]
    fn two_tetrahedra_sharing_a_vertex() {
        let x = SimplicialComplex::new([r(&[1, 2, 3, 4]), r(&[1, 5, 6, 7])]).unwrap();
        assert_eq!(certify(&x).kind, TopologyKind::Neither);
    }

    #[test]
    fn pinched_sphere_fails_link_check() {
        // Two octahedra glued at a vertex: Betti numbers are not those of a
        // sphere, and even the wedge of two spheres is caught.
        let oct = |o: u64| {
            let mut fs = Vec::new();
            for &a in &[1, 2] {
                for &b in &[3, 4] {
                    for &c in &[5, 6] {
                        let m = |x: u64| if x == 1 { 1 } else { x + o };
                        fs.push(r(&[m(a), m(b), m(c)]));
                    }
                }
            }
            fs
        };
        let mut fs = oct(0);
        fs.extend(oct(10));
        let x = SimplicialComplex::new(fs).unwrap();
        assert_eq!(certify(&x).kind, TopologyKind::Neither);
    }

    #[test]
    fn suspension_of_rp2_is_not_a_sphere() {
        // Links detect what homology alone does not see at the cone points.
        let rp2: Vec<Simplex> = [
            [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
            [2, 3, 5], [3, 4, 6], [2, 4, 5], [3, 5, 6], [2, 4, 6],
        ]
        .iter()
        .map(|t| r(t))
        .collect();
        let base = SimplicialComplex::new(rp2).unwrap();
        let susp = join(&base, &SimplicialComplex::new([r(&[100]), r(&[101])]).unwrap()).unwrap();
        assert_eq!(certify(&susp).kind, TopologyKind::Neither);
    }

    #[test]
    fn cone_over_sphere_is_ball_and_closing_gives_sphere() {
        let s = cyclic_polytope_facets(7, 4).unwrap();
        let c = cone(&s, VertexId::ConeApex).unwrap();
        assert!(certify(&c).is_ball(4));
        let joined = join(&path(1, 2), &path(2, 2)).unwrap();
        let bd = boundary_complex(&joined).unwrap();
        assert!(certify(&bd).is_sphere(2));
    }

    #[test]
    fn joins_of_spheres() {
        let s0 = |p: u32| SimplicialComplex::new([Simplex::vertex(VertexId::path(p, 1)), Simplex::vertex(VertexId::path(p, 2))]).unwrap();
        let s1 = |p: u32| {
            SimplicialComplex::new([
                Simplex::from_verts([VertexId::path(p, 1), VertexId::path(p, 2)]),
                Simplex::from_verts([VertexId::path(p, 2), VertexId::path(p, 3)]),
                Simplex::from_verts([VertexId::path(p, 1), VertexId::path(p, 3)]),
            ])
            .unwrap()
        };
        assert!(certify(&join(&s0(1), &s0(2)).unwrap()).is_sphere(1));
        assert!(certify(&join(&s0(1), &s1(2)).unwrap()).is_sphere(2));
        assert!(certify(&join(&s1(1), &s1(2)).unwrap()).is_sphere(3));
    }
}
