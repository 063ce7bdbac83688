//! Lower-envelope certification of polyhedral subdivisions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{affine_interpolant, eval_affine, nullspace};
use super::{pow2_inv, Point, Scalar};
use crate::error::{Error, Result};

/// Labelled points with a lifting function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Serialize + Ord, T: Scalar", deserialize = "K: Deserialize<'de> + Ord, T: Scalar"))]
pub struct LiftedConfiguration<K, T> {
    pub points: Vec<(K, Point<T>)>,
    #[serde(with = "scalar_map")]
    pub heights: BTreeMap<K, T>,
}

mod scalar_map {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<K: Serialize + Ord, T: Scalar, S: Serializer>(m: &BTreeMap<K, T>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
    }

    pub fn deserialize<'de, K: Deserialize<'de> + Ord, T: Scalar, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<K, T>, D::Error> {
        let raw: BTreeMap<K, String> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| v.parse::<T>().map(|x| (k, x)).map_err(|_| D::Error::custom(format!("bad rational {v:?}"))))
            .collect()
    }
}

impl<K: Ord + Clone, T: Scalar> LiftedConfiguration<K, T> {
    pub fn new(points: Vec<(K, Point<T>)>, heights: BTreeMap<K, T>) -> Result<Self> {
        let ids: BTreeSet<&K> = points.iter().map(|(k, _)| k).collect();
        if ids.len() != points.len() {
            return Err(Error::DegenerateInput("repeated point label".into()));
        }
        if ids.len() != heights.len() || !heights.keys().all(|k| ids.contains(k)) {
            return Err(Error::DegenerateInput("heights must be given on exactly the points".into()));
        }
        Ok(LiftedConfiguration { points, heights })
    }

    /// Points in one dimension more, the last coordinate being the height.
    pub fn lifted_points(&self) -> Vec<(K, Point<T>)> {
        self.points.iter().map(|(k, p)| (k.clone(), p.lifted(self.heights[k].clone()))).collect()
    }
}

/// Cells given as point sets; each is claimed to be a face of the lower
/// envelope of the lifted configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision<K: Ord> {
    pub cells: Vec<BTreeSet<K>>,
}

/// `coarse + eps · fine`, on the keys of `coarse`.
pub fn compose_lift<K: Ord + Clone, T: Scalar>(coarse: &BTreeMap<K, T>, fine: &BTreeMap<K, T>, eps: &T) -> Result<BTreeMap<K, T>> {
    if coarse.len() != fine.len() || !coarse.keys().all(|k| fine.contains_key(k)) {
        return Err(Error::DegenerateInput("lifting functions on different point sets".into()));
    }
    Ok(coarse.iter().map(|(k, v)| (k.clone(), v.clone() + eps.clone() * fine[k].clone())).collect())
}

/// Hyperplane `n·x + n0 = 0` through `pts` when they are affinely independent
/// and span one.
fn hyperplane<T: Scalar>(pts: &[&[T]]) -> Option<Vec<T>> {
    let d = pts[0].len();
    let rows: Vec<Vec<T>> = pts.iter().map(|p| p.iter().cloned().chain([T::one()]).collect()).collect();
    let ns = nullspace(rows, d + 1);
    (ns.len() == 1).then(|| ns.into_iter().next().unwrap())
}

fn side<T: Scalar>(h: &[T], x: &[T]) -> T {
    eval_affine(h, x)
}

/// Facets of the polytope spanned by `cell`, as point sets with a
/// hyperplane through each.
fn walls<'a, K: Ord + Clone, T: Scalar>(cell: &[(&'a K, &'a [T])]) -> Vec<(BTreeSet<K>, Vec<T>)> {
    let d = cell[0].1.len();
    let mut found: BTreeMap<BTreeSet<K>, Vec<T>> = BTreeMap::new();
    for subset in cell.iter().combinations(d) {
        if found.keys().any(|w| subset.iter().all(|(k, _)| w.contains(*k))) {
            continue;
        }
        let pts: Vec<&[T]> = subset.iter().map(|(_, p)| *p).collect();
        let Some(h) = hyperplane(&pts) else { continue };
        let vals: Vec<T> = cell.iter().map(|(_, p)| side(&h, p)).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let w: BTreeSet<K> = cell.iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|((k, _), _)| (*k).clone()).collect();
        found.insert(w, h);
    }
    found.into_iter().collect()
}

/// Why `sub` is not the regular subdivision induced by `heights`, or `None`.
pub fn regularity_failure<K, T>(pts: &[(K, Point<T>)], heights: &BTreeMap<K, T>, sub: &Subdivision<K>) -> Result<Option<String>>
where
    K: Ord + Clone + Debug + Send + Sync,
    T: Scalar,
{
    let index: BTreeMap<&K, &Point<T>> = pts.iter().map(|(k, p)| (k, p)).collect();
    let distinct: BTreeSet<&BTreeSet<K>> = sub.cells.iter().collect();
    if distinct.len() != sub.cells.len() {
        return Ok(Some("repeated cell".into()));
    }
    for c in &sub.cells {
        if let Some(k) = c.iter().find(|k| !index.contains_key(k)) {
            return Err(Error::FaceNotFound(format!("cell point {k:?} is not in the configuration")));
        }
    }
    let per_cell: Vec<Result<std::result::Result<Vec<(BTreeSet<K>, Vec<T>)>, String>>> = sub
        .cells
        .par_iter()
        .map(|cell| {
            let cpts: Vec<(&K, &[T])> = cell.iter().map(|k| (k, index[k].coords())).collect();
            let coords: Vec<&[T]> = cpts.iter().map(|(_, p)| *p).collect();
            let vals: Vec<T> = cell.iter().map(|k| heights[k].clone()).collect();
            let coef = match affine_interpolant(&coords, &vals) {
                Err(()) => return Err(Error::DegenerateCell(format!("{cell:?}"))),
                Ok(None) => return Ok(Err(format!("cell {cell:?} does not lift to a hyperplane"))),
                Ok(Some(c)) => c,
            };
            for (k, p) in pts {
                if !cell.contains(k) && heights[k] <= eval_affine(&coef, p.coords()) {
                    return Ok(Err(format!("point {k:?} is not strictly above cell {cell:?}")));
                }
            }
            Ok(Ok(walls(&cpts)))
        })
        .collect();
    let mut wall_count: BTreeMap<BTreeSet<K>, (usize, Vec<T>)> = BTreeMap::new();
    for r in per_cell {
        match r? {
            Err(why) => return Ok(Some(why)),
            Ok(ws) => {
                for (w, h) in ws {
                    wall_count.entry(w).or_insert((0, h)).0 += 1;
                }
            }
        }
    }
    for (w, (count, h)) in &wall_count {
        match count {
            2 => {}
            1 => {
                let vals: Vec<T> = pts.iter().map(|(_, p)| side(h, p.coords())).collect();
                if vals.iter().any(|v| v.is_positive()) && vals.iter().any(|v| v.is_negative()) {
                    return Ok(Some(format!("wall {w:?} lies in a single cell but not on the hull")));
                }
            }
            _ => return Ok(Some(format!("wall {w:?} lies in {count} cells"))),
        }
    }
    Ok(None)
}

/// Whether `sub` is exactly the regular subdivision induced by `heights`:
/// cells lift to hyperplanes with all other points strictly above, and the
/// cells close up across interior walls.
pub fn verify_regular<K, T>(pts: &[(K, Point<T>)], heights: &BTreeMap<K, T>, sub: &Subdivision<K>) -> Result<bool>
where
    K: Ord + Clone + Debug + Send + Sync,
    T: Scalar,
{
    Ok(regularity_failure(pts, heights, sub)?.is_none())
}

/// The largest `ε = 2^{-t}`, `t ≤ 64`, for which `coarse + ε·fine` induces
/// `target`. Returns `ε` and `t`.
pub fn eps_search<K, T>(
    pts: &[(K, Point<T>)],
    coarse: &BTreeMap<K, T>,
    fine: &BTreeMap<K, T>,
    target: &Subdivision<K>,
) -> Result<(T, u32)>
where
    K: Ord + Clone + Debug + Send + Sync,
    T: Scalar,
{
    for t in 1..=64 {
        let eps = pow2_inv::<T>(t);
        if verify_regular(pts, &compose_lift(coarse, fine, &eps)?, target)? {
            return Ok((eps, t));
        }
    }
    Err(Error::EpsSearchExhausted(64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64) -> Q {
        Q::from_integer(a.into())
    }

    fn square() -> Vec<(u32, Point<Q>)> {
        vec![
            (0, Point::from_ints(&[0, 0])),
            (1, Point::from_ints(&[2, 0])),
            (2, Point::from_ints(&[0, 2])),
            (3, Point::from_ints(&[2, 2])),
            (4, Point::from_ints(&[1, 1])),
        ]
    }

    fn cells(cs: &[&[u32]]) -> Subdivision<u32> {
        Subdivision { cells: cs.iter().map(|c| c.iter().copied().collect()).collect() }
    }

    #[test]
    fn paraboloid_triangulation() {
        let pts = square();
        let h: BTreeMap<u32, Q> = pts.iter().map(|(k, p)| (*k, p.0.iter().map(|x| x * x).sum())).collect();
        let fan = cells(&[&[0, 1, 4], &[1, 3, 4], &[3, 2, 4], &[2, 0, 4]]);
        assert!(verify_regular(&pts, &h, &fan).unwrap());
        let missing = cells(&[&[0, 1, 4], &[1, 3, 4], &[3, 2, 4]]);
        assert!(!verify_regular(&pts, &h, &missing).unwrap());
        let wrong = cells(&[&[0, 1, 2], &[1, 2, 3]]);
        assert!(!verify_regular(&pts, &h, &wrong).unwrap());
    }

    #[test]
    fn flat_lift_is_one_cell() {
        let pts = square();
        let mut h: BTreeMap<u32, Q> = pts.iter().map(|(k, _)| (*k, q(0))).collect();
        assert!(verify_regular(&pts, &h, &cells(&[&[0, 1, 2, 3, 4]])).unwrap());
        h.insert(4, q(1));
        assert!(!verify_regular(&pts, &h, &cells(&[&[0, 1, 2, 3, 4]])).unwrap());
        assert!(verify_regular(&pts, &h, &cells(&[&[0, 1, 2, 3]])).unwrap());
        assert!(matches!(verify_regular(&pts, &h, &cells(&[&[0, 3, 4]])), Err(Error::DegenerateCell(_))));
    }

    #[test]
    fn perturbation_search() {
        let pts = square();
        let coarse: BTreeMap<u32, Q> = pts.iter().map(|(k, _)| (*k, q(0))).collect();
        let mut fine = coarse.clone();
        fine.insert(4, q(-1));
        let fan = cells(&[&[0, 1, 4], &[1, 3, 4], &[3, 2, 4], &[2, 0, 4]]);
        let (eps, t) = eps_search(&pts, &coarse, &fine, &fan).unwrap();
        assert_eq!((eps, t), (Q::new(1.into(), 2.into()), 1));
        let zero: BTreeMap<u32, Q> = coarse.clone();
        assert!(eps_search(&pts, &coarse, &zero, &cells(&[&[0, 1, 2, 3, 4]])).is_ok());
        assert!(matches!(eps_search(&pts, &coarse, &zero, &fan), Err(Error::EpsSearchExhausted(64))));
        assert_eq!(compose_lift(&coarse, &fine, &q(0)).unwrap(), coarse);
    }

    #[test]
    fn lifted_configuration_json() {
        let pts = square();
        let h: BTreeMap<u32, Q> = pts.iter().map(|(k, _)| (*k, Q::new((*k as i64).into(), 3.into()))).collect();
        let lc = LiftedConfiguration::new(pts, h).unwrap();
        let s = serde_json::to_string(&lc).unwrap();
        assert!(s.contains(r#""1":"1/3""#));
        let back: LiftedConfiguration<u32, Q> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, lc);
    }
}
