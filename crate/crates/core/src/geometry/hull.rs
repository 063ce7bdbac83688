//! Brute-force exact convex hulls.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{affine_dim, eval_affine, nullspace};
use super::{Point, Scalar};
use crate::error::{Error, Result};

/// A facet of a convex hull with its supporting hyperplane
/// `normal · x + offset = 0`; all points satisfy `normal · x + offset ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet<K: Ord, T> {
    pub vertices: BTreeSet<K>,
    pub normal: Vec<T>,
    pub offset: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FacetKind {
    Simplex,
    Bipyramid,
    Other,
}

/// Hull facets of a full-dimensional point set, found by testing every
/// affinely independent `D`-subset and merging coplanar ones.
pub fn convex_hull_brute<K, T>(pts: &[(K, Point<T>)]) -> Result<Vec<HullFacet<K, T>>>
where
    K: Ord + Clone + Debug + Send + Sync,
    T: Scalar,
{
    let d = pts.first().map_or(0, |(_, p)| p.dim());
    let coords: Vec<&[T]> = pts.iter().map(|(_, p)| p.coords()).collect();
    if d == 0 || affine_dim(&coords) != d as isize {
        return Err(Error::DegenerateInput("points are not full-dimensional".into()));
    }
    let found: Vec<(BTreeSet<usize>, Vec<T>)> = (0..pts.len())
        .combinations(d)
        .par_bridge()
        .filter_map(|subset| {
            let rows: Vec<Vec<T>> = subset.iter().map(|&i| coords[i].iter().cloned().chain([T::one()]).collect()).collect();
            let ns = nullspace(rows, d + 1);
            if ns.len() != 1 {
                return None;
            }
            let mut h = ns.into_iter().next().unwrap();
            let mut sign = 0i8;
            let mut on = BTreeSet::new();
            for (i, x) in coords.iter().enumerate() {
                let v = eval_affine(&h, x);
                let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
                if s == 0 {
                    on.insert(i);
                } else if sign == 0 {
                    sign = s;
                } else if s != sign {
                    return None;
                }
            }
            if sign > 0 {
                h.iter_mut().for_each(|x| *x = -x.clone());
            }
            (*on.first()? == subset[0] && subset.iter().all(|i| on.contains(i))).then_some((on, h))
        })
        .collect();
    let mut by_set: BTreeMap<BTreeSet<usize>, Vec<T>> = BTreeMap::new();
    for (on, h) in found {
        by_set.entry(on).or_insert(h);
    }
    Ok(by_set
        .into_iter()
        .map(|(on, mut h)| {
            let offset = h.pop().expect("affine coefficient");
            HullFacet { vertices: on.into_iter().map(|i| pts[i].0.clone()).collect(), normal: h, offset }
        })
        .collect())
}

/// Hull of `pts` together with a point above their centroid, raised until
/// no facet avoiding it faces upwards. Vertical facets over the boundary of
/// the projected hull survive. Returns the apex and the facets.
pub fn hull_with_apex<K, T>(pts: &[(K, Point<T>)], apex: K) -> Result<(Point<T>, Vec<HullFacet<K, T>>)>
where
    K: Ord + Clone + Debug + Send + Sync,
    T: Scalar,
{
    let d = pts.first().map_or(0, |(_, p)| p.dim());
    if d < 2 {
        return Err(Error::DegenerateInput("apex needs lifted points".into()));
    }
    let n = T::from_usize(pts.len()).expect("count fits");
    let mut centre: Vec<T> = (0..d - 1).map(|i| pts.iter().fold(T::zero(), |a, (_, p)| a + p.0[i].clone()) / n.clone()).collect();
    let top = pts.iter().map(|(_, p)| p.0[d - 1].clone()).fold(T::zero(), |a, b| if b > a { b } else { a });
    let mut gap = T::one();
    centre.push(T::zero());
    for _ in 0..64 {
        centre[d - 1] = top.clone() + gap.clone();
        let apex_pt = Point(centre.clone());
        let mut all = pts.to_vec();
        all.push((apex.clone(), apex_pt.clone()));
        let facets = convex_hull_brute(&all)?;
        if facets.iter().all(|f| f.vertices.contains(&apex) || !f.normal[d - 1].is_positive()) {
            return Ok((apex_pt, facets));
        }
        gap = gap.clone() + gap;
    }
    Err(Error::InternalInvariantViolation("no apex height closes the hull".into()))
}

/// Classifies facets of a 4-polytope: four vertices is a simplex; five
/// vertices whose 2-faces are the six triangles of `∂Δ¹ * ∂Δ²` is a
/// bipyramid.
pub fn detect_bipyramid_facets<K: Ord + Clone, T>(facets: &[HullFacet<K, T>]) -> Vec<FacetKind> {
    facets
        .iter()
        .enumerate()
        .map(|(i, f)| match f.vertices.len() {
            4 => FacetKind::Simplex,
            5 => {
                let inter: Vec<BTreeSet<K>> = facets
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, g)| f.vertices.intersection(&g.vertices).cloned().collect::<BTreeSet<K>>())
                    .filter(|s| s.len() >= 3)
                    .collect();
                let faces: BTreeSet<BTreeSet<K>> =
                    inter.iter().filter(|s| !inter.iter().any(|t| t.len() > s.len() && s.is_subset(t))).cloned().collect();
                if is_bipyramid_faces(&f.vertices, &faces) {
                    FacetKind::Bipyramid
                } else {
                    FacetKind::Other
                }
            }
            _ => FacetKind::Other,
        })
        .collect()
}

fn is_bipyramid_faces<K: Ord + Clone>(verts: &BTreeSet<K>, faces: &BTreeSet<BTreeSet<K>>) -> bool {
    if faces.len() != 6 || faces.iter().any(|f| f.len() != 3) {
        return false;
    }
    let (apexes, equator): (Vec<&K>, Vec<&K>) = verts.iter().partition(|v| faces.iter().filter(|f| f.contains(*v)).count() == 3);
    if apexes.len() != 2 || equator.len() != 3 {
        return false;
    }
    let expected: BTreeSet<BTreeSet<K>> = apexes
        .iter()
        .flat_map(|a| equator.iter().combinations(2).map(move |e| [(*a).clone(), (*e[0]).clone(), (*e[1]).clone()].into()))
        .collect();
    &expected == faces
}
