//! The named constructions: holes carved from joins of paths or from the
//! boundary of a cyclic 4-polytope, filled with free sum cells.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::carvefill::{carve_and_fill, greedy_compatible_subfamily, is_compatible, missing_face, BallInComplex, CompatibleFamily, FillManifest};
use crate::complex::SimplicialComplex;
use crate::cyclic::cyclic_polytope_facets;
use crate::error::{Error, Result};
use crate::grid::{
    aztec_center, aztec_crosspolytope, boundary_members, diagonal_band, ehrhart_crosspolytope, is_grid_starconvex,
    join_of_paths, shelling_order_band, shelling_order_unimodal_2d, Cell, GridBox, GridRegion,
};
use crate::simplex::Simplex;
use crate::topology::{verify_shelling, ShellingOrder, TopologyKind};
use crate::vertex::VertexId;

/// Output of a construction with the counts it claims.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub construction: String,
    #[serde(skip)]
    pub manifest: FillManifest,
    pub expected: TopologyKind,
    pub vertex_count: usize,
    pub free_cell_count: usize,
    pub simplex_cell_count: usize,
    pub per_hole_counts: BTreeMap<u64, usize>,
    /// Band index, subgrid tuple, etc. identifying each hole key.
    pub hole_labels: BTreeMap<u64, Vec<i64>>,
    /// Size of each hole's candidate family before any filtering.
    pub candidate_counts: BTreeMap<u64, usize>,
    /// Holes whose candidate family is not compatible.
    pub incompatible_holes: Vec<u64>,
    /// Named quantities with their exact values for this instance.
    pub claimed_bounds: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

struct Hole {
    key: u64,
    label: Vec<i64>,
    candidates: usize,
    family: CompatibleFamily,
}

struct Assembly {
    name: String,
    host: SimplicialComplex,
    holes: Vec<Hole>,
    incompatible: Vec<u64>,
    close: bool,
    expected: TopologyKind,
    notes: Vec<String>,
}

impl Assembly {
    fn finish(self, claimed: Vec<(&str, Ratio<i64>)>) -> Result<ConstructionReport> {
        let pairs: Vec<(u64, CompatibleFamily)> = self.holes.iter().map(|h| (h.key, h.family.clone())).collect();
        let mut manifest = carve_and_fill(&self.host, &pairs)?;
        if self.close {
            manifest = manifest.close_with_cone()?;
        }
        let per_hole_counts = manifest.free_cells_by_ball.iter().map(|(k, v)| (*k, v.len())).collect();
        Ok(ConstructionReport {
            construction: self.name,
            expected: self.expected,
            vertex_count: manifest.result.vertices().len(),
            free_cell_count: manifest.num_free_cells(),
            simplex_cell_count: manifest.result.simplex_cells().len(),
            per_hole_counts,
            hole_labels: self.holes.iter().map(|h| (h.key, h.label.clone())).collect(),
            candidate_counts: self.holes.iter().map(|h| (h.key, h.candidates)).collect(),
            incompatible_holes: self.incompatible,
            claimed_bounds: claimed.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            notes: self.notes,
            manifest,
        })
    }
}

fn ratio(a: i64, b: i64) -> Ratio<i64> {
    Ratio::new(a, b)
}

fn region_ball(host: &Arc<SimplicialComplex>, r: &GridRegion) -> Result<BallInComplex> {
    BallInComplex::new(host.clone(), r.simplices())
}

fn certify_ball(ball: &BallInComplex, dim: isize, what: &str) -> Result<()> {
    let cert = ball.certify();
    if cert.kind != TopologyKind::Ball(dim) {
        return Err(Error::InternalInvariantViolation(format!("{what} is not a {dim}-ball: {:?}", cert.kind)));
    }
    Ok(())
}

fn check_shelling(ball: &BallInComplex, order: ShellingOrder, what: &str) -> Result<()> {
    if !verify_shelling(&ball.as_complex(), &order)? {
        return Err(Error::InternalInvariantViolation(format!("{what}: shelling order rejected")));
    }
    Ok(())
}

/// Members at the two extreme diagonals of each band of width `w` in an
/// `(n−1) × (m−1)` grid.
fn diagonal_holes(n: u32, m: u32, w: u32, name: &str) -> Result<(SimplicialComplex, Vec<(u64, BallInComplex, BTreeSet<Simplex>)>, Vec<String>)> {
    if n < 4 || m < 4 {
        return Err(Error::DegenerateInput(format!("{name} needs n, m ≥ 4")));
    }
    let (k, _) = join_of_paths(&[n, m])?;
    let host = Arc::new(k.clone());
    let bbox = GridBox::from_path_lengths(&[n, m])?;
    let top = n + m - 2;
    let mut holes = Vec::new();
    let mut notes = Vec::new();
    for band in 1..=(n + m).div_ceil(w) {
        let (lo, hi) = ((w * band + 1).saturating_sub(w).max(2), (w * band).min(top));
        if lo > hi {
            continue;
        }
        let region = diagonal_band(&bbox, lo, hi)?.region;
        if region.len() < 2 {
            notes.push(format!("band {band} has a single cell and is left unfilled"));
            continue;
        }
        let ball = region_ball(&host, &region)?;
        certify_ball(&ball, 3, &format!("band {band}"))?;
        let cands = region.cells().iter().filter(|c| c[0] + c[1] == lo || c[0] + c[1] == hi);
        holes.push((band as u64, ball, cands.map(|c| crate::grid::cell_simplex(c)).collect()));
    }
    Ok((k, holes, notes))
}

/// Bands of width four along the anti-diagonals of the grid; the result is
/// coned to a 3-sphere.
pub fn build_holes4(n: u32, m: u32) -> Result<ConstructionReport> {
    let (host, bands, mut notes) = diagonal_holes(n, m, 4, "holes4")?;
    let mut holes = Vec::new();
    for (key, ball, cands) in bands {
        let (taken, rejected) = greedy_compatible_subfamily(&ball, &cands);
        if !rejected.is_empty() {
            notes.push(format!("band {key}: {} extreme cells have their missing edge on the boundary", rejected.len()));
        }
        holes.push(Hole { key, label: vec![key as i64], candidates: cands.len(), family: CompatibleFamily::new(ball, taken)? });
    }
    let asm = Assembly {
        name: "holes4".into(),
        host,
        holes,
        incompatible: Vec::new(),
        close: true,
        expected: TopologyKind::Sphere(3),
        notes,
    };
    let (n, m) = (n as i64, m as i64);
    asm.finish(vec![("bipyramids ~ nm/2", ratio(n * m, 2)), ("vertices ~ 5n/2", ratio(5 * n, 2)), ("holes", ratio((n + m + 3) / 4, 1))])
}

/// Bands of width three. Candidate families repeat missing edges, so each
/// hole keeps a greedy maximal compatible subfamily.
pub fn build_holes3(n: u32, m: u32) -> Result<ConstructionReport> {
    let (host, bands, mut notes) = diagonal_holes(n, m, 3, "holes3")?;
    let mut holes = Vec::new();
    let mut incompatible = Vec::new();
    for (key, ball, cands) in bands {
        if !is_compatible(&CompatibleFamily { ball: ball.clone(), members: cands.clone() }) {
            incompatible.push(key);
        }
        let (taken, _) = greedy_compatible_subfamily(&ball, &cands);
        notes.push(format!("band {key}: kept {} of {} candidates", taken.len(), cands.len()));
        holes.push(Hole { key, label: vec![key as i64], candidates: cands.len(), family: CompatibleFamily::new(ball, taken)? });
    }
    let asm = Assembly {
        name: "holes3".into(),
        host,
        holes,
        incompatible,
        close: true,
        expected: TopologyKind::Sphere(3),
        notes,
    };
    let (n, m) = (n as i64, m as i64);
    asm.finish(vec![("bipyramids ~ 2n^2/3", ratio(2 * n * m, 3)), ("holes ~ 2n/3", ratio(n + m, 3))])
}

fn subgrid_tuples(d: usize, l: u32) -> Vec<Vec<u32>> {
    GridBox::cube(d, l).map(|b| b.cells().collect()).unwrap_or_default()
}

/// `l^d` Aztec crosspolytope holes, one per `k × … × k` subgrid of the
/// `(kl)^d` grid. Hole keys enumerate subgrids lexicographically.
pub fn build_aztec_highd(d: usize, k: u32, l: u32) -> Result<ConstructionReport> {
    if !(2..=4).contains(&d) || l == 0 {
        return Err(Error::DegenerateInput(format!("aztec holes need 2 ≤ d ≤ 4 and l ≥ 1, got d={d} l={l}")));
    }
    let shape = aztec_crosspolytope(d, k)?;
    let n = k * l + 1;
    let (host, _) = join_of_paths(&vec![n; d])?;
    let host_arc = Arc::new(host.clone());
    let bbox = GridBox::cube(d, k * l)?;
    let mut holes = Vec::new();
    for (key, sub) in subgrid_tuples(d, l).into_iter().enumerate() {
        let shift = |c: &Cell| -> Cell { c.iter().zip(&sub).map(|(&i, &p)| i + (p - 1) * k).collect() };
        let region = GridRegion::new(bbox.clone(), shape.cells().iter().map(shift))?;
        let center = shift(&aztec_center(d, k));
        if !is_grid_starconvex(&region, &center)? {
            return Err(Error::InternalInvariantViolation(format!("hole {sub:?} is not starconvex")));
        }
        let members = boundary_members(&region);
        let ball = region_ball(&host_arc, &region)?;
        if d == 2 {
            certify_ball(&ball, 3, &format!("hole {sub:?}"))?;
        }
        holes.push(Hole {
            key: key as u64,
            label: sub.iter().map(|&p| p as i64).collect(),
            candidates: members.len(),
            family: CompatibleFamily::new(ball, members)?,
        });
    }
    let asm = Assembly {
        name: if d == 2 { "aztec".into() } else { "aztec-hd".into() },
        host,
        holes,
        incompatible: Vec::new(),
        close: false,
        expected: TopologyKind::Ball(2 * d as isize - 1),
        notes: Vec::new(),
    };
    let (dd, kk, ll) = (d as i64, k as i64, l as i64);
    let per_hole = ehrhart_crosspolytope(d as u64, (k as u64 - 1) / 2) - ehrhart_crosspolytope(d as u64, (k as u64 - 3) / 2);
    let holes = ll.pow(d as u32);
    let mut claimed = vec![
        ("free cells l^d (E_d((k-1)/2) - E_d((k-3)/2))", ratio(holes * per_hole as i64, 1)),
        ("vertices d(kl+1) + l^d", ratio(dd * (kk * ll + 1) + holes, 1)),
    ];
    if d == 2 {
        claimed.push(("bipyramids (2k-2)l^2", ratio((2 * kk - 2) * ll * ll, 1)));
    }
    asm.finish(claimed)
}

/// `l^2` Aztec diamond holes in the `(kl) × (kl)` grid.
pub fn build_aztec(k: u32, l: u32) -> Result<ConstructionReport> {
    build_aztec_highd(2, k, l)
}

/// Bands `(b−1)(d+2) ≤ ΣI < b(d+2)` in the `(n−1)^d` grid, filled with the
/// members whose missing face has `d` vertices; the result is coned to a
/// `(2d−1)`-sphere.
pub fn build_highd(d: usize, n: u32) -> Result<ConstructionReport> {
    if !(2..=4).contains(&d) || n < d as u32 + 3 {
        return Err(Error::DegenerateInput(format!("highd needs 2 ≤ d ≤ 4 and n ≥ d+3, got d={d} n={n}")));
    }
    let (host, _) = join_of_paths(&vec![n; d])?;
    let host_arc = Arc::new(host.clone());
    let bbox = GridBox::cube(d, n - 1)?;
    let w = d as u32 + 2;
    let top = d as u32 * (n - 1);
    let mut holes = Vec::new();
    let mut notes = Vec::new();
    let mut band = 1;
    while (band - 1) * w <= top {
        let (lo, hi) = (((band - 1) * w).max(d as u32), (band * w - 1).min(top));
        band += 1;
        if lo > hi {
            continue;
        }
        let b = diagonal_band(&bbox, lo, hi)?;
        if b.region.len() < 2 {
            notes.push(format!("band {} has a single cell and is left unfilled", band - 1));
            continue;
        }
        let ball = region_ball(&host_arc, &b.region)?;
        let order = shelling_order_band(&b).map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
        check_shelling(&ball, order, &format!("band {}", band - 1))?;
        let all = boundary_members(&b.region);
        let cands: BTreeSet<Simplex> =
            all.iter().filter(|s| missing_face(&ball, s).map(|f| f.len() == d).unwrap_or(false)).cloned().collect();
        let (taken, _) = greedy_compatible_subfamily(&ball, &cands);
        holes.push(Hole {
            key: band as u64 - 1,
            label: vec![band as i64 - 1],
            candidates: all.len(),
            family: CompatibleFamily::new(ball, taken)?,
        });
    }
    let asm = Assembly {
        name: "highd".into(),
        host,
        holes,
        incompatible: Vec::new(),
        close: true,
        expected: TopologyKind::Sphere(2 * d as isize - 1),
        notes,
    };
    let nd = (n as i64).pow(d as u32);
    asm.finish(vec![("free cells ~ 2n^d/(d+2)", ratio(2 * nd, d as i64 + 2))])
}

/// The two start points `p, q` of a facet `{p, p+1, q, q+1}` of `∂C(N,4)`.
fn start_points(f: &Simplex, big_n: u64) -> (u64, u64) {
    let v: BTreeSet<u64> = f.verts().iter().map(raw).collect();
    let starts: Vec<u64> = v.iter().copied().filter(|&p| v.contains(&((p + 1) % big_n))).collect();
    match starts.as_slice() {
        [p, q] => (*p, *q),
        // Four consecutive labels x..x+3: three starts, the outer pairs win.
        [_, _, _] => {
            let x = starts.iter().copied().find(|&p| !v.contains(&((p + big_n - 1) % big_n))).expect("consecutive run");
            (x, (x + 2) % big_n)
        }
        _ => unreachable!("not a facet of a cyclic 4-polytope"),
    }
}

fn raw(v: &VertexId) -> u64 {
    match v {
        VertexId::Raw(i) => *i,
        _ => unreachable!("cyclic labels are raw"),
    }
}

fn quad(p: u64, q: u64, big_n: u64) -> Simplex {
    [p, p + 1, q, q + 1].into_iter().map(|x| VertexId::Raw(x % big_n)).collect()
}

/// Facets of `∂C(4n, 4)` on labels `0..4n`.
pub fn cyclic_host(n: u32) -> Result<SimplicialComplex> {
    let big_n = 4 * n as u64;
    let facets = cyclic_polytope_facets(big_n, 4)?
        .into_facets()
        .into_iter()
        .map(|f| f.verts().iter().map(|v| VertexId::Raw(raw(v) % big_n)).collect::<Simplex>());
    SimplicialComplex::new(facets)
}

/// Hole `k` of the cyclic construction: facets with `p + q mod 4n` in
/// `{4k−2, …, 4k+1}` except the two runs of four consecutive labels with
/// `p + q ≡ 4k−2`.
pub fn cyclic_band(host: &SimplicialComplex, n: u32, k: u32) -> BTreeSet<Simplex> {
    let big_n = 4 * n as u64;
    let lo = (4 * k as u64 + big_n - 2) % big_n;
    host.facets()
        .iter()
        .filter(|f| {
            let (p, q) = start_points(f, big_n);
            let r = (p + q) % big_n;
            let off = (r + big_n - lo) % big_n;
            let run = (q + big_n - p) % big_n == 2 || (p + big_n - q) % big_n == 2;
            off < 4 && !(off == 0 && run)
        })
        .cloned()
        .collect()
}

/// Shelling order of a cyclic hole, read off its picture as a band in the
/// `2n × 2n` grid of the join `[1, 2n] * [2n+1, 4n]`.
pub fn cyclic_band_shelling(band: &BTreeSet<Simplex>, n: u32, k: u32) -> Result<ShellingOrder> {
    let big_n = 4 * n as u64;
    let two_n = 2 * n as u64;
    let s = (2 * k as u64 + big_n - two_n) % big_n;
    let mut cells = Vec::new();
    for f in band {
        let back: Simplex = f.verts().iter().map(|v| VertexId::Raw((raw(v) + big_n - s) % big_n)).collect();
        let (p, q) = start_points(&back, big_n);
        let cell = [(p, q), (q, p)].into_iter().find_map(|(i, j)| {
            let j = if j == 0 { big_n } else { j };
            ((1..=two_n).contains(&i) && (two_n + 1..=big_n).contains(&j) && (big_n - 2..=big_n + 1).contains(&(i + j)))
                .then(|| vec![i as u32, (j - two_n) as u32])
        });
        cells.push(cell.ok_or_else(|| Error::InternalInvariantViolation(format!("{f} has no grid picture")))?);
    }
    let region = GridRegion::new(GridBox::cube(2, 2 * n)?, cells)?;
    let order = shelling_order_unimodal_2d(&region)?;
    Ok(ShellingOrder {
        order: order.into_iter().map(|c| quad((c[0] as u64 + s) % big_n, (c[1] as u64 + two_n + s) % big_n, big_n)).collect(),
    })
}

/// `n` holes carved from `∂C(4n, 4)`, each filled with the members on its
/// two extreme residues.
pub fn build_cyclic(n: u32) -> Result<ConstructionReport> {
    if n < 3 {
        return Err(Error::DegenerateInput(format!("cyclic needs n ≥ 3, got {n}")));
    }
    let big_n = 4 * n as u64;
    let host = cyclic_host(n)?;
    let host_arc = Arc::new(host.clone());
    let mut holes = Vec::new();
    let mut notes = Vec::new();
    for k in 1..=n {
        let band = cyclic_band(&host, n, k);
        let ball = BallInComplex::new(host_arc.clone(), band.clone())?;
        check_shelling(&ball, cyclic_band_shelling(&band, n, k)?, &format!("hole {k}"))?;
        let lo = (4 * k as u64 + big_n - 2) % big_n;
        let hi = (4 * k as u64 + 1) % big_n;
        let cands: BTreeSet<Simplex> = band
            .iter()
            .filter(|f| {
                let (p, q) = start_points(f, big_n);
                let r = (p + q) % big_n;
                r == lo || r == hi
            })
            .cloned()
            .collect();
        let (taken, rejected) = greedy_compatible_subfamily(&ball, &cands);
        if !rejected.is_empty() {
            notes.push(format!("hole {k}: {} members dropped", rejected.len()));
        }
        holes.push(Hole { key: k as u64, label: vec![k as i64], candidates: cands.len(), family: CompatibleFamily::new(ball, taken)? });
    }
    notes.push(format!(
        "the host is already a sphere, so no cone apex is added: {} + {} = {} vertices, one fewer than the stated 5n+1",
        big_n, n, 5 * n
    ));
    let asm = Assembly {
        name: "cyclic".into(),
        host,
        holes,
        incompatible: Vec::new(),
        close: false,
        expected: TopologyKind::Sphere(3),
        notes,
    };
    let nn = n as i64;
    asm.finish(vec![("bipyramids ~ 4n^2", ratio(4 * nn * nn, 1)), ("vertices 5n+1", ratio(5 * nn + 1, 1))])
}
