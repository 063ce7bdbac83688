//! Coordinates and lifting functions for the Aztec-hole construction.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::regular::{compose_lift, eps_search, regularity_failure, LiftedConfiguration, Subdivision};
use super::{pow2_inv, Point, Scalar};
use crate::carvefill::{realize, FillManifest};
use crate::complex::{boundary_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::vertex::VertexId;

fn int<T: Scalar>(x: i64) -> T {
    T::from_i64(x).expect("integer fits")
}

/// Vertices of the join of paths: `a_i = (i,0,1)`, `b_j = (0,j,−1)` for two
/// paths; for more, the first `d−1` paths are mapped by `x ↦ (x,0,−1)` and
/// path `d` goes on the line `(0,…,0,t,1)`, starting from `a_t = (t)`.
pub fn standard_coordinates<T: Scalar>(path_lengths: &[u32]) -> Result<Vec<(VertexId, Point<T>)>> {
    if path_lengths.is_empty() || path_lengths.iter().any(|&n| n < 2) {
        return Err(Error::DegenerateInput(format!("path lengths {path_lengths:?}")));
    }
    if let [n, m] = path_lengths {
        let a = (1..=*n as i64).map(|i| (VertexId::path(1, i as u32), Point::from_ints(&[i, 0, 1])));
        let b = (1..=*m as i64).map(|j| (VertexId::path(2, j as u32), Point::from_ints(&[0, j, -1])));
        return Ok(a.chain(b).collect());
    }
    let mut pts: Vec<(VertexId, Point<T>)> =
        (1..=path_lengths[0] as i64).map(|t| (VertexId::path(1, t as u32), Point::from_ints(&[t]))).collect();
    for (p, &len) in path_lengths.iter().enumerate().skip(1) {
        let dim = 2 * p - 1;
        for (_, x) in pts.iter_mut() {
            x.0.extend([T::zero(), -T::one()]);
        }
        for t in 1..=len as i64 {
            let mut c = vec![T::zero(); dim];
            c.push(int(t));
            c.push(T::one());
            pts.push((VertexId::path(p as u32 + 1, t as u32), Point(c)));
        }
    }
    Ok(pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiamondCell {
    Rectangle,
    Quadrilateral,
    Pentagon,
}

/// A lift of the `(k+1) × (k+1)` grid plus its center, indexed by odd
/// coordinates in `[−k, k]` (the center is `(0,0)`), inducing grid
/// rectangles outside the Aztec diamond and a cone from the center inside.
#[derive(Clone, Debug)]
pub struct AztecLift<T> {
    pub k: i64,
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    pub omega: BTreeMap<(i64, i64), T>,
    pub alpha: BTreeMap<i64, T>,
    pub beta: BTreeMap<i64, T>,
    pub cells: Vec<(DiamondCell, BTreeSet<(i64, i64)>)>,
}

impl<T: Scalar> AztecLift<T> {
    fn x(&self, s: i64) -> T {
        self.xs[((s + self.k) / 2) as usize].clone()
    }

    fn y(&self, s: i64) -> T {
        self.ys[((s + self.k) / 2) as usize].clone()
    }

    pub fn points(&self) -> Vec<((i64, i64), Point<T>)> {
        self.omega
            .keys()
            .map(|&(i, j)| {
                let p = if (i, j) == (0, 0) { Point(vec![T::zero(), T::zero()]) } else { Point(vec![self.x(i), self.y(j)]) };
                ((i, j), p)
            })
            .collect()
    }

    pub fn subdivision(&self) -> Subdivision<(i64, i64)> {
        Subdivision { cells: self.cells.iter().map(|(_, c)| c.clone()).collect() }
    }

    pub fn count(&self, kind: DiamondCell) -> usize {
        self.cells.iter().filter(|(c, _)| *c == kind).count()
    }
}

fn check_coordinates<T: Scalar>(k: i64, v: &[T], name: &str) -> Result<()> {
    if v.len() != (k + 1) as usize {
        return Err(Error::DegenerateInput(format!("{name} needs {} values", k + 1)));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateInput(format!("{name} must be strictly increasing")));
    }
    if (0..v.len()).any(|i| v[i] != -v[v.len() - 1 - i].clone()) {
        return Err(Error::SymmetryViolation(format!("{name} is not antisymmetric")));
    }
    Ok(())
}

/// Heights `ω` on the grid splitting as `α_i + β_j`, with `ω(0,0) = 0`, that
/// induce the Aztec subdivision. The reflex corners of the diamond are
/// lifted by a convex radial function so the star of the center lifts
/// strictly convex; all other values follow from coplanarity of the cone
/// cells. Squared distance is tried first; when it does not certify, a
/// rational approximation of the Euclidean norm (a cone) is used.
pub fn aztec_lift<T: Scalar>(k: u32, xs: &[T], ys: &[T]) -> Result<AztecLift<T>> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::DegenerateInput(format!("k must be odd and at least 3, got {k}")));
    }
    let k = k as i64;
    check_coordinates(k, xs, "xs")?;
    check_coordinates(k, ys, "ys")?;
    match lift_with(k, xs, ys, |v: T| v) {
        Err(Error::LiftConstructionFailed(_)) => lift_with(k, xs, ys, rational_sqrt),
        r => r,
    }
}

/// `√v` to roughly 60 bits, by Newton steps from the float estimate.
fn rational_sqrt<T: Scalar>(v: T) -> T {
    let f = v.to_f64().expect("finite").sqrt();
    let mut r = T::from_f64(f).expect("finite");
    let two = int::<T>(2);
    for _ in 0..2 {
        r = (r.clone() + v.clone() / r) / two.clone();
    }
    r
}

fn lift_with<T: Scalar>(k: i64, xs: &[T], ys: &[T], radial: impl Fn(T) -> T) -> Result<AztecLift<T>> {
    let mut lift = AztecLift {
        k,
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        omega: BTreeMap::new(),
        alpha: BTreeMap::new(),
        beta: BTreeMap::new(),
        cells: Vec::new(),
    };
    let mut w: BTreeMap<(i64, i64), T> = BTreeMap::new();
    for i in (1..=k - 2).step_by(2) {
        let (x, y) = (lift.x(i), lift.y(k - 1 - i));
        w.insert((i, k - 1 - i), radial(x.clone() * x + y.clone() * y));
    }
    w.insert((1, k), w[&(1, k - 2)].clone() * lift.y(k) / lift.y(k - 2));
    w.insert((k, 1), w[&(k - 2, 1)].clone() * lift.x(k) / lift.x(k - 2));
    for i in (3..=k - 2).step_by(2) {
        // Plane through the origin and the reflex corners (i, k−1−i), (i−2, k+1−i).
        let (x1, y1, h1) = (lift.x(i), lift.y(k - 1 - i), w[&(i, k - 1 - i)].clone());
        let (x2, y2, h2) = (lift.x(i - 2), lift.y(k + 1 - i), w[&(i - 2, k + 1 - i)].clone());
        let det = x1.clone() * y2.clone() - x2.clone() * y1.clone();
        let gx = (h1.clone() * y2 - h2.clone() * y1) / det.clone();
        let gy = (x1 * h2 - x2 * h1) / det;
        w.insert((i, k + 1 - i), gx * lift.x(i) + gy * lift.y(k + 1 - i));
    }
    let mut alpha = BTreeMap::from([(1, T::zero())]);
    let mut beta = BTreeMap::from([(k, w[&(1, k)].clone())]);
    for i in (3..=k).step_by(2) {
        let a = w[&(i, k + 1 - i)].clone() - w[&(i - 2, k + 1 - i)].clone() + alpha[&(i - 2)].clone();
        let b = w[&(i - 2, k + 1 - i)].clone() - w[&(i - 2, k + 3 - i)].clone() + beta[&(k + 3 - i)].clone();
        alpha.insert(i, a);
        beta.insert(k + 1 - i, b);
    }
    for i in (1..=k).step_by(2) {
        alpha.insert(-i, alpha[&i].clone());
        beta.insert(-i, beta[&i].clone());
    }
    for i in (-k..=k).step_by(2) {
        for j in (-k..=k).step_by(2) {
            lift.omega.insert((i, j), alpha[&i].clone() + beta[&j].clone());
        }
    }
    lift.omega.insert((0, 0), T::zero());
    lift.alpha = alpha;
    lift.beta = beta;
    lift.cells = diamond_cells(k);
    let pts = lift.points();
    if let Some(why) = regularity_failure(&pts, &lift.omega, &lift.subdivision())? {
        return Err(Error::LiftConstructionFailed(why));
    }
    Ok(lift)
}

/// Grid rectangles outside the diamond, then per quadrant the quadrilaterals
/// at the convex corners and the four pentagons on the axes. A quadrilateral
/// also contains the fourth corner of its grid square, which lifts onto it.
fn diamond_cells(k: i64) -> Vec<(DiamondCell, BTreeSet<(i64, i64)>)> {
    let mut cells = Vec::new();
    for s in (-k..k).step_by(2) {
        for t in (-k..k).step_by(2) {
            if (s + 1).abs() + (t + 1).abs() > k - 1 {
                cells.push((DiamondCell::Rectangle, [(s, t), (s + 2, t), (s, t + 2), (s + 2, t + 2)].into()));
            }
        }
    }
    for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        for i in (3..=k - 2).step_by(2) {
            let c = [(0, 0), (i, k + 1 - i), (i, k - 1 - i), (i - 2, k + 1 - i), (i - 2, k - 1 - i)];
            cells.push((DiamondCell::Quadrilateral, c.iter().map(|&(x, y)| (sx * x, sy * y)).collect()));
        }
    }
    for sign in [1, -1] {
        let vertical = [(0, 0), (-1, k), (1, k), (-1, k - 2), (1, k - 2)];
        cells.push((DiamondCell::Pentagon, vertical.iter().map(|&(x, y)| (x, sign * y)).collect()));
        let horizontal = [(0, 0), (k, -1), (k, 1), (k - 2, -1), (k - 2, 1)];
        cells.push((DiamondCell::Pentagon, horizontal.iter().map(|&(x, y)| (sign * x, y)).collect()));
    }
    cells
}

/// The point configuration of the Aztec construction with its two lifting
/// functions: `coarse` (the coarse join, convex `t²` on coarse path points,
/// linear in between, centers on their coarse hyperplane) and `fine`
/// (`2α`, `2β` of the single-diamond lift on each subgrid, zero on centers).
#[derive(Clone, Debug)]
pub struct AztecConfiguration<T> {
    pub k: u32,
    pub l: u32,
    pub points: Vec<(VertexId, Point<T>)>,
    pub coarse: BTreeMap<VertexId, T>,
    pub fine: BTreeMap<VertexId, T>,
    pub centers: Vec<VertexId>,
    pub coarse_cells: Subdivision<VertexId>,
}

pub fn aztec_configuration<T: Scalar>(k: u32, l: u32) -> Result<AztecConfiguration<T>> {
    if l == 0 {
        return Err(Error::DegenerateInput("l must be positive".into()));
    }
    let s: Vec<T> = (0..=k as i64).map(|t| int(2 * t - k as i64)).collect();
    let unit = aztec_lift(k, &s, &s)?;
    let n = k * l + 1;
    let mut points = standard_coordinates::<T>(&[n, n])?;
    let kk = int::<T>(k as i64);
    let coarse_path = |i: u32| -> T {
        let (p, r) = ((i - 1) / k, (i - 1) % k);
        let p = int::<T>(p as i64);
        p.clone() * p.clone() + int::<T>(r as i64) * (p.clone() + p + T::one()) / kk.clone()
    };
    let local = |i: u32| -> i64 {
        let r = ((i - 1) % k) as i64;
        if r == 0 && i > 1 {
            k as i64
        } else {
            2 * r - k as i64
        }
    };
    let mut coarse = BTreeMap::new();
    let mut fine = BTreeMap::new();
    for i in 1..=n {
        let two = int::<T>(2);
        coarse.insert(VertexId::path(1, i), coarse_path(i));
        coarse.insert(VertexId::path(2, i), coarse_path(i));
        fine.insert(VertexId::path(1, i), two.clone() * unit.alpha[&local(i)].clone());
        fine.insert(VertexId::path(2, i), two * unit.beta[&local(i)].clone());
    }
    let mut centers = Vec::new();
    let mut coarse_cells = Vec::new();
    let four = int::<T>(4);
    let two = int::<T>(2);
    for p in 0..l {
        for q in 0..l {
            let key = (p * l + q) as u64;
            let o = VertexId::HoleApex(key);
            let (i0, i1, j0, j1) = (1 + p * k, 1 + (p + 1) * k, 1 + q * k, 1 + (q + 1) * k);
            let x = int::<T>(i0 as i64 + i1 as i64) / four.clone();
            let y = int::<T>(j0 as i64 + j1 as i64) / four.clone();
            points.push((o, Point(vec![x, y, T::zero()])));
            let ha = (coarse_path(i0) + coarse_path(i1)) / two.clone();
            let hb = (coarse_path(j0) + coarse_path(j1)) / two.clone();
            coarse.insert(o, (ha + hb) / two.clone());
            fine.insert(o, T::zero());
            centers.push(o);
            let cell: BTreeSet<VertexId> = (i0..=i1)
                .map(|i| VertexId::path(1, i))
                .chain((j0..=j1).map(|j| VertexId::path(2, j)))
                .chain([o])
                .collect();
            coarse_cells.push(cell);
        }
    }
    Ok(AztecConfiguration { k, l, points, coarse, fine, centers, coarse_cells: Subdivision { cells: coarse_cells } })
}

impl<T: Scalar> AztecConfiguration<T> {
    /// Cells of a fill manifest as point sets, apexes mapping to centers.
    pub fn target(m: &FillManifest) -> Subdivision<VertexId> {
        let mut cells: Vec<BTreeSet<VertexId>> = m.result.simplex_cells().iter().map(|s| s.verts().iter().copied().collect()).collect();
        cells.extend(m.free_cells().iter().map(|c| c.vertices().verts().iter().copied().collect()));
        Subdivision { cells }
    }

    /// Certified `ε` with `coarse + ε·fine` inducing the manifest's cells.
    pub fn certify(&self, m: &FillManifest) -> Result<(T, u32, LiftedConfiguration<VertexId, T>)> {
        let (eps, t) = eps_search(&self.points, &self.coarse, &self.fine, &Self::target(m))?;
        let heights = compose_lift(&self.coarse, &self.fine, &eps)?;
        Ok((eps, t, LiftedConfiguration::new(self.points.clone(), heights)?))
    }
}

/// Adds `delta` to the height of each center and checks that the result
/// induces `target`.
pub fn raise_centers<T: Scalar>(
    lifted: &LiftedConfiguration<VertexId, T>,
    centers: &[VertexId],
    delta: &T,
    target: &Subdivision<VertexId>,
) -> Result<LiftedConfiguration<VertexId, T>> {
    let mut heights = lifted.heights.clone();
    for c in centers {
        let h = heights.get_mut(c).ok_or_else(|| Error::FaceNotFound(format!("center {c}")))?;
        *h = h.clone() + delta.clone();
    }
    if let Some(why) = regularity_failure(&lifted.points, &heights, target)? {
        return Err(Error::DeltaTooLarge(format!("{delta}: {why}")));
    }
    LiftedConfiguration::new(lifted.points.clone(), heights)
}

/// The triangulation obtained by raising the centers: every free cell split
/// with choice `false`. Searches `δ = 2^{-t}` and returns the raised lift, the
/// triangulated ball and `t`.
pub fn find_raise_delta<T: Scalar>(
    lifted: &LiftedConfiguration<VertexId, T>,
    centers: &[VertexId],
    m: &FillManifest,
) -> Result<(LiftedConfiguration<VertexId, T>, SimplicialComplex, u32)> {
    let ball = realize(m, &vec![false; m.num_free_cells()])?;
    let target = Subdivision { cells: ball.facets().iter().map(|s| s.verts().iter().copied().collect()).collect() };
    let mut last = None;
    for t in 1..=64 {
        match raise_centers(lifted, centers, &pow2_inv(t), &target) {
            Ok(raised) => return Ok((raised, ball, t)),
            Err(Error::DeltaTooLarge(why)) => last = Some(why),
            Err(e) => return Err(e),
        }
    }
    Err(Error::DeltaTooLarge(format!("no 2^-t with t <= 64 works; last: {}", last.unwrap_or_default())))
}

/// Edges lying in exactly three facets of the sphere obtained by coning the
/// boundary of `ball` to a new vertex.
pub fn count_degree3_edges(ball: &SimplicialComplex) -> Result<usize> {
    let bd = boundary_complex(ball)?;
    let mut deg: BTreeMap<Simplex, usize> = BTreeMap::new();
    let apex = VertexId::ConeApex;
    let cone = bd.facets().iter().map(|r| r.with(apex));
    for f in ball.facets().iter().cloned().chain(cone) {
        for e in f.faces().filter(|e| e.len() == 2) {
            *deg.entry(e).or_insert(0) += 1;
        }
    }
    Ok(deg.values().filter(|&&d| d == 3).count())
}
