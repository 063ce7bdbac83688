//! Grids of cubes indexing the joins of paths, and regions inside them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::topology::ShellingOrder;
use crate::vertex::VertexId;

/// A cell index `(i_1, …, i_d)`, 1-based.
pub type Cell = Vec<u32>;

/// An `(n_1 − 1) × … × (n_d − 1)` grid of cubes. `dims` holds cube counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GridBox {
    dims: Vec<u32>,
}

impl GridBox {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DegenerateInput(format!("grid box {dims:?}")));
        }
        Ok(GridBox { dims })
    }

    /// Box of the join of paths with the given numbers of vertices.
    pub fn from_path_lengths(lengths: &[u32]) -> Result<Self> {
        if lengths.iter().any(|&n| n < 2) {
            return Err(Error::DegenerateInput(format!("path lengths {lengths:?}")));
        }
        GridBox::new(lengths.iter().map(|n| n - 1).collect())
    }

    pub fn cube(d: usize, side: u32) -> Result<Self> {
        GridBox::new(vec![side; d])
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn path_lengths(&self) -> Vec<u32> {
        self.dims.iter().map(|n| n + 1).collect()
    }

    pub fn contains(&self, c: &[u32]) -> bool {
        c.len() == self.d() && c.iter().zip(&self.dims).all(|(&i, &n)| i >= 1 && i <= n)
    }

    /// All cells in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.dims.iter().map(|&n| 1..=n).multi_cartesian_product()
    }
}

impl TryFrom<Vec<u32>> for GridBox {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        GridBox::new(v)
    }
}

impl From<GridBox> for Vec<u32> {
    fn from(b: GridBox) -> Self {
        b.dims
    }
}

/// A set of cells of a [`GridBox`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub struct GridRegion {
    bbox: GridBox,
    cells: BTreeSet<Cell>,
}

#[derive(Serialize, Deserialize)]
struct RegionRepr {
    #[serde(rename = "box")]
    bbox: GridBox,
    cells: Vec<Cell>,
}

impl TryFrom<RegionRepr> for GridRegion {
    type Error = Error;
    fn try_from(r: RegionRepr) -> Result<Self> {
        GridRegion::new(r.bbox, r.cells)
    }
}

impl From<GridRegion> for RegionRepr {
    fn from(r: GridRegion) -> Self {
        RegionRepr { bbox: r.bbox, cells: r.cells.into_iter().collect() }
    }
}

impl GridRegion {
    pub fn new(bbox: GridBox, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        if let Some(c) = cells.iter().find(|c| !bbox.contains(c)) {
            return Err(Error::DegenerateInput(format!("cell {c:?} outside box {:?}", bbox.dims)));
        }
        Ok(GridRegion { bbox, cells })
    }

    pub fn full(bbox: GridBox) -> Self {
        let cells = bbox.cells().collect();
        GridRegion { bbox, cells }
    }

    pub fn grid_box(&self) -> &GridBox {
        &self.bbox
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &[u32]) -> bool {
        self.cells.contains(c)
    }

    /// The simplices `T_I` of the region inside the join of paths.
    pub fn simplices(&self) -> BTreeSet<Simplex> {
        self.cells.iter().map(|c| cell_simplex(c)).collect()
    }

    /// The `(d−1)`-dimensional region of cells with `i_axis = value`.
    pub fn slice(&self, axis: usize, value: u32) -> Option<GridRegion> {
        if self.bbox.d() < 2 {
            return None;
        }
        let mut dims = self.bbox.dims.clone();
        dims.remove(axis);
        let cells = self
            .cells
            .iter()
            .filter(|c| c[axis] == value)
            .map(|c| {
                let mut c = c.clone();
                c.remove(axis);
                c
            })
            .collect();
        Some(GridRegion { bbox: GridBox { dims }, cells })
    }
}

/// `T_I = ∪_j {a^(j)_{i_j}, a^(j)_{i_j+1}}`, with path `j` labelled `j+1`.
pub fn cell_simplex(c: &[u32]) -> Simplex {
    Simplex::from_verts(
        c.iter().enumerate().flat_map(|(j, &i)| [VertexId::path(j as u32 + 1, i), VertexId::path(j as u32 + 1, i + 1)]),
    )
}

/// Inverse of [`cell_simplex`] on simplices of a join of paths.
pub fn simplex_cell(s: &Simplex) -> Option<Cell> {
    let mut by_path: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in s.verts() {
        match *v {
            VertexId::PathVertex { path, pos } => by_path.entry(path).or_default().push(pos),
            _ => return None,
        }
    }
    let d = by_path.len() as u32;
    let mut cell = Vec::new();
    for (j, (p, pos)) in by_path.into_iter().enumerate() {
        if p != j as u32 + 1 || pos.len() != 2 || pos[1] != pos[0] + 1 {
            return None;
        }
        cell.push(pos[0]);
    }
    (cell.len() as u32 == d).then_some(cell)
}

/// The join of `d` paths, together with the bijection from cells to facets.
pub fn join_of_paths(path_lengths: &[u32]) -> Result<(SimplicialComplex, BTreeMap<Cell, Simplex>)> {
    let bbox = GridBox::from_path_lengths(path_lengths)?;
    let map: BTreeMap<Cell, Simplex> = bbox.cells().map(|c| (c.clone(), cell_simplex(&c))).collect();
    let k = SimplicialComplex::new(map.values().cloned())?;
    Ok((k, map))
}

fn neighbours(c: &[u32]) -> impl Iterator<Item = Cell> + '_ {
    (0..c.len()).flat_map(move |j| {
        [-1i64, 1].into_iter().filter_map(move |s| {
            let v = c[j] as i64 + s;
            (v >= 1).then(|| {
                let mut n = c.to_vec();
                n[j] = v as u32;
                n
            })
        })
    })
}

fn connected(cells: &BTreeSet<Cell>) -> bool {
    let Some(start) = cells.iter().next() else {
        return true;
    };
    let mut seen: BTreeSet<&Cell> = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        for n in neighbours(&c) {
            if let Some(m) = cells.get(&n) {
                if seen.insert(m) {
                    queue.push_back(n);
                }
            }
        }
    }
    seen.len() == cells.len()
}

/// Connectivity of the graph joining cells that differ by one in one index.
pub fn is_grid_connected(r: &GridRegion) -> bool {
    connected(&r.cells)
}

/// Every cell lying in the coordinate box spanned by `center` and some cell
/// of `r` belongs to `r`.
pub fn is_grid_starconvex(r: &GridRegion, center: &[u32]) -> Result<bool> {
    if !r.contains(center) {
        return Err(Error::FaceNotFound(format!("center {center:?} not in region")));
    }
    Ok(r.cells.iter().all(|c| {
        c.iter()
            .zip(center)
            .map(|(&a, &b)| a.min(b)..=a.max(b))
            .multi_cartesian_product()
            .all(|x| r.cells.contains(&x))
    }))
}

/// Intervals in dimension one; otherwise connected with every axis-aligned
/// slice unimodal.
pub fn is_grid_unimodal(r: &GridRegion) -> bool {
    if r.bbox.d() == 1 {
        return match (r.cells.first(), r.cells.last()) {
            (Some(a), Some(b)) => (b[0] - a[0]) as usize + 1 == r.len(),
            _ => true,
        };
    }
    if !is_grid_connected(r) {
        return false;
    }
    (0..r.bbox.d()).all(|axis| {
        let values: BTreeSet<u32> = r.cells.iter().map(|c| c[axis]).collect();
        values.into_iter().all(|v| is_grid_unimodal(&r.slice(axis, v).expect("d ≥ 2")))
    })
}

/// The cells with `m1 ≤ i_1 + … + i_d ≤ m2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBand {
    pub region: GridRegion,
    pub m1: u32,
    pub m2: u32,
    /// One of the hypotheses under which the band is known to be shellable.
    pub shellable_guaranteed: bool,
}

pub fn diagonal_band(bbox: &GridBox, m1: u32, m2: u32) -> Result<DiagonalBand> {
    let d = bbox.d() as u32;
    let top: u32 = bbox.dims.iter().sum();
    if !(d <= m1 && m1 <= m2 && m2 <= top) {
        return Err(Error::DegenerateInput(format!("band [{m1},{m2}] outside [{d},{top}]")));
    }
    let cells = bbox.cells().filter(|c| (m1..=m2).contains(&c.iter().sum::<u32>())).collect();
    Ok(DiagonalBand {
        region: GridRegion { bbox: bbox.clone(), cells },
        m1,
        m2,
        shellable_guaranteed: m2 - m1 >= d || m1 == d || m2 == top,
    })
}

/// A shelling order of the band, built along the inductive decomposition
/// into the part below the last layer and the last layer itself.
pub fn shelling_order_band(band: &DiagonalBand) -> Result<ShellingOrder> {
    if !band.shellable_guaranteed {
        return Err(Error::HypothesisNotSatisfied(format!("band [{},{}]", band.m1, band.m2)));
    }
    let cells = band_order(band.region.bbox.dims(), band.m1 as i64, band.m2 as i64);
    debug_assert_eq!(cells.len(), band.region.len());
    Ok(ShellingOrder { order: cells.iter().map(|c| cell_simplex(c)).collect() })
}

fn band_order(dims: &[u32], m1: i64, m2: i64) -> Vec<Cell> {
    let d = dims.len() as i64;
    let top: i64 = dims.iter().map(|&n| n as i64).sum();
    let (m1, m2) = (m1.max(d), m2.min(top));
    if m1 > m2 {
        return Vec::new();
    }
    let last = *dims.last().expect("d ≥ 1") as i64;
    if d == 1 {
        return (m1..=m2).map(|i| vec![i as u32]).collect();
    }
    let rest = &dims[..dims.len() - 1];
    let lift = |cells: Vec<Cell>, i: i64| -> Vec<Cell> {
        cells
            .into_iter()
            .map(|mut c| {
                c.push(i as u32);
                c
            })
            .collect()
    };
    if last == 1 {
        return lift(band_order(rest, m1 - 1, m2 - 1), 1);
    }
    let mut shorter = dims.to_vec();
    *shorter.last_mut().unwrap() -= 1;
    let mut out = band_order(&shorter, m1, m2);
    if m1 <= d + last - 3 {
        out.extend(lift(band_order(rest, m1 - last, m2 - last), last));
    } else {
        out.extend(lift(band_order(rest, m1 + 1 - last, m2 - last), last));
        out.extend(lift(band_order(rest, m1 - last, m1 - last), last));
    }
    out
}

/// A shelling order of a grid-unimodal region in dimension two, obtained by
/// repeatedly removing an end of the last nonempty row.
pub fn shelling_order_unimodal_2d(r: &GridRegion) -> Result<Vec<Cell>> {
    if r.bbox.d() != 2 || !is_grid_unimodal(r) {
        return Err(Error::HypothesisNotSatisfied("not a grid-unimodal planar region".into()));
    }
    let mut left = r.cells.clone();
    let mut removed = Vec::with_capacity(left.len());
    while let Some(last) = left.last().cloned() {
        let i0 = last[0];
        let jmin = left.range(vec![i0, 0]..).next().expect("row nonempty").clone();
        left.remove(&jmin);
        if connected(&left) {
            removed.push(jmin);
        } else {
            left.insert(jmin);
            left.remove(&last);
            if !connected(&left) {
                return Err(Error::InternalInvariantViolation(format!("no removable cell in row {i0}")));
            }
            removed.push(last);
        }
    }
    removed.reverse();
    Ok(removed)
}

/// Cells at ℓ1 distance at most `(k−1)/2` from the central cube of a
/// `k × … × k` box.
pub fn aztec_crosspolytope(d: usize, k: u32) -> Result<GridRegion> {
    if k < 3 || k.is_multiple_of(2) || d == 0 {
        return Err(Error::DegenerateInput(format!("aztec shape needs odd k ≥ 3, got d={d} k={k}")));
    }
    let c = k.div_ceil(2);
    let radius = (k - 1) / 2;
    let bbox = GridBox::cube(d, k)?;
    let cells = bbox.cells().filter(|x| x.iter().map(|&i| i.abs_diff(c)).sum::<u32>() <= radius).collect();
    Ok(GridRegion { bbox, cells })
}

pub fn aztec_diamond(k: u32) -> Result<GridRegion> {
    aztec_crosspolytope(2, k)
}

/// Central cell of [`aztec_crosspolytope`].
pub fn aztec_center(d: usize, k: u32) -> Cell {
    vec![k.div_ceil(2); d]
}

/// `E_d(x) = Σ_i C(d,i) C(x+i,d)`, the lattice points of the `x`-dilated
/// crosspolytope.
pub fn ehrhart_crosspolytope(d: u64, x: u64) -> u64 {
    (0..=d).map(|i| binomial(d, i) * binomial(x + i, d)).sum()
}

/// Number of facets of `T_I` on the boundary of the region's ball.
pub fn boundary_facet_count(r: &GridRegion, c: &[u32]) -> usize {
    2 * c.len() - neighbours(c).filter(|n| r.cells.contains(n)).count()
}

/// Simplices of the region with at least two facets on its boundary.
pub fn boundary_members(r: &GridRegion) -> BTreeSet<Simplex> {
    r.cells.iter().filter(|c| boundary_facet_count(r, c) >= 2).map(|c| cell_simplex(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{certify, verify_shelling};

    fn region(dims: &[u32], cells: &[&[u32]]) -> GridRegion {
        GridRegion::new(GridBox::new(dims.to_vec()).unwrap(), cells.iter().map(|c| c.to_vec())).unwrap()
    }

    fn ball(r: &GridRegion) -> SimplicialComplex {
        SimplicialComplex::new(r.simplices()).unwrap()
    }

    #[test]
    fn joins() {
        let (k, map) = join_of_paths(&[3, 3]).unwrap();
        assert_eq!((k.dim(), k.num_facets()), (3, 4));
        assert!(map.iter().all(|(c, s)| simplex_cell(s).as_ref() == Some(c)));
        let (k, _) = join_of_paths(&[5]).unwrap();
        assert_eq!((k.dim(), k.num_facets()), (1, 4));
        let (k, _) = join_of_paths(&[3, 3, 3]).unwrap();
        assert_eq!((k.dim(), k.num_facets()), (5, 8));
        assert!(k.facets().iter().all(|f| f.len() == 6));
        assert!(matches!(join_of_paths(&[3, 1]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn predicates() {
        let l = region(&[2, 2], &[&[1, 1], &[1, 2], &[2, 2]]);
        assert!(is_grid_connected(&l));
        assert!(!is_grid_connected(&region(&[2, 2], &[&[1, 1], &[2, 2]])));
        assert!(is_grid_starconvex(&l, &[1, 2]).unwrap());
        assert!(!is_grid_starconvex(&l, &[1, 1]).unwrap());
        assert!(matches!(is_grid_starconvex(&l, &[2, 1]), Err(Error::FaceNotFound(_))));
        assert!(!is_grid_unimodal(&region(&[3, 3], &[&[1, 1], &[1, 3]])));
        let full = GridRegion::full(GridBox::new(vec![3, 4]).unwrap());
        assert!(full.cells().iter().all(|c| is_grid_starconvex(&full, c).unwrap()));
    }

    #[test]
    fn starconvex_matches_triple_oracle() {
        let l = region(&[2, 2], &[&[1, 1], &[1, 2], &[2, 2]]);
        let oracle = |c: &[u32]| {
            l.cells().iter().all(|x| {
                GridBox::new(vec![2, 2]).unwrap().cells().all(|y| {
                    let between = (0..2).all(|t| y[t] >= x[t].min(c[t]) && y[t] <= x[t].max(c[t]));
                    !between || l.contains(&y)
                })
            })
        };
        for c in l.cells() {
            assert_eq!(is_grid_starconvex(&l, c).unwrap(), oracle(c));
        }
    }

    #[test]
    fn bands() {
        let bx = GridBox::cube(2, 4).unwrap();
        let b = diagonal_band(&bx, 3, 6).unwrap();
        assert!(is_grid_unimodal(&b.region) && is_grid_connected(&b.region));
        let bx8 = GridBox::cube(2, 8).unwrap();
        let b2 = diagonal_band(&bx8, 5, 8).unwrap();
        let oracle: BTreeSet<Cell> =
            (1..=8).flat_map(|i| (1..=8).map(move |j| vec![i, j])).filter(|c| (5..=8).contains(&(c[0] + c[1]))).collect();
        assert_eq!(b2.region.cells(), &oracle);
        let corner = diagonal_band(&bx8, 2, 2).unwrap();
        assert_eq!(corner.region.cells().iter().collect::<Vec<_>>(), vec![&vec![1, 1]]);
        let b3 = diagonal_band(&GridBox::cube(3, 5).unwrap(), 3, 6).unwrap();
        let mut count = 0;
        for i in 1..=5 {
            for j in 1..=5 {
                for k in 1..=5 {
                    count += (3..=6).contains(&(i + j + k)) as usize;
                }
            }
        }
        assert_eq!(b3.region.len(), count);
        assert!(diagonal_band(&bx, 1, 3).is_err());
        assert!(diagonal_band(&bx, 5, 4).is_err());
        assert!(diagonal_band(&bx, 3, 9).is_err());
    }

    fn check_band(dims: &[u32], m1: u32, m2: u32) {
        let band = diagonal_band(&GridBox::new(dims.to_vec()).unwrap(), m1, m2).unwrap();
        let order = shelling_order_band(&band).unwrap();
        assert_eq!(order.order.len(), band.region.len());
        let x = ball(&band.region);
        assert!(verify_shelling(&x, &order).unwrap(), "{dims:?} [{m1},{m2}]");
    }

    #[test]
    fn band_shellings() {
        for (m1, m2) in [(2, 5), (5, 8), (9, 12), (13, 16), (2, 2), (3, 6), (12, 16), (16, 16)] {
            check_band(&[8, 8], m1, m2);
        }
        check_band(&[5, 5, 5], 3, 8);
        check_band(&[4, 3, 5], 3, 3);
        check_band(&[4, 4, 4], 7, 12);
        check_band(&[4, 4, 4], 6, 9);
        check_band(&[3, 3, 3, 3], 8, 12);
        let thin = diagonal_band(&GridBox::cube(2, 8).unwrap(), 6, 7).unwrap();
        assert!(!thin.shellable_guaranteed);
        assert!(matches!(shelling_order_band(&thin), Err(Error::HypothesisNotSatisfied(_))));
    }

    #[test]
    fn unimodal_2d_shelling() {
        let r = diagonal_band(&GridBox::cube(2, 7).unwrap(), 6, 7).unwrap().region;
        let order = shelling_order_unimodal_2d(&r).unwrap();
        let so = ShellingOrder { order: order.iter().map(|c| cell_simplex(c)).collect() };
        assert!(verify_shelling(&ball(&r), &so).unwrap());
        let az = aztec_diamond(7).unwrap();
        let so = ShellingOrder { order: shelling_order_unimodal_2d(&az).unwrap().iter().map(|c| cell_simplex(c)).collect() };
        assert!(verify_shelling(&ball(&az), &so).unwrap());
    }

    #[test]
    fn unimodal_regions_are_balls() {
        for r in [aztec_diamond(5).unwrap(), diagonal_band(&GridBox::cube(2, 6).unwrap(), 5, 6).unwrap().region] {
            assert!(is_grid_unimodal(&r));
            assert!(certify(&ball(&r)).is_ball(3));
        }
        let hole = region(&[3, 3], &[&[1, 1], &[1, 2], &[1, 3], &[2, 1], &[2, 3], &[3, 1], &[3, 2], &[3, 3]]);
        assert!(!is_grid_unimodal(&hole));
        assert!(!certify(&ball(&hole)).is_ball(3));
    }

    #[test]
    fn aztec_counts() {
        assert_eq!(aztec_diamond(3).unwrap().len(), 5);
        assert_eq!(aztec_diamond(5).unwrap().len(), 13);
        assert_eq!(aztec_crosspolytope(1, 3).unwrap().len(), 3);
        assert!(aztec_diamond(4).is_err());
        assert_eq!(ehrhart_crosspolytope(2, 1), 5);
        assert_eq!(ehrhart_crosspolytope(2, 2), 13);
        assert_eq!(ehrhart_crosspolytope(3, 1), 7);
        for d in 1..=4 {
            assert_eq!(ehrhart_crosspolytope(d, 0), 1);
            for k in [3, 5, 7, 9] {
                let r = aztec_crosspolytope(d as usize, k).unwrap();
                assert_eq!(r.len() as u64, ehrhart_crosspolytope(d, (k as u64 - 1) / 2), "d={d} k={k}");
                assert!(is_grid_starconvex(&r, &aztec_center(d as usize, k)).unwrap());
            }
        }
        assert!(is_grid_unimodal(&aztec_diamond(5).unwrap()));
    }

    #[test]
    fn boundary_member_counts() {
        for k in [3, 5, 7] {
            assert_eq!(boundary_members(&aztec_diamond(k).unwrap()).len() as u32, 2 * k - 2);
        }
        for d in 2..=3u64 {
            for k in [3u64, 5, 7] {
                let r = aztec_crosspolytope(d as usize, k as u32).unwrap();
                let want = ehrhart_crosspolytope(d, (k - 1) / 2) - ehrhart_crosspolytope(d, (k - 3) / 2);
                assert_eq!(boundary_members(&r).len() as u64, want);
            }
        }
        let single = region(&[3, 3], &[&[2, 2]]);
        assert_eq!(boundary_members(&single).len(), 1);
    }

    #[test]
    fn region_json_round_trip() {
        let r = aztec_diamond(3).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with(r#"{"box":[3,3],"cells":[[1,2],"#));
        assert_eq!(serde_json::from_str::<GridRegion>(&s).unwrap(), r);
        assert!(serde_json::from_str::<GridRegion>(r#"{"box":[2,2],"cells":[[3,1]]}"#).is_err());
    }
}
