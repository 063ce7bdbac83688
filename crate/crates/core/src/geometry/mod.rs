//! Exact realizations: coordinates, lifting functions, regularity checks and
//! convex hulls. Everything is generic over a [`Scalar`] field; the crate
//! uses [`BigRational`](num_rational::BigRational) throughout.

mod aztec;
mod hull;
pub mod linalg;
mod regular;

use std::collections::BTreeMap;
use std::fmt::{Debug, Display, Write as _};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use aztec::{
    aztec_configuration, aztec_lift, count_degree3_edges, find_raise_delta, raise_centers, standard_coordinates,
    AztecConfiguration, AztecLift, DiamondCell,
};
pub use hull::{convex_hull_brute, detect_bipyramid_facets, hull_with_apex, FacetKind, HullFacet};
pub use regular::{compose_lift, eps_search, regularity_failure, verify_regular, LiftedConfiguration, Subdivision};

/// An ordered field with exact comparisons.
pub trait Scalar:
    Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Send + Sync
{
}

/// `2^{-t}`.
pub fn pow2_inv<T: Scalar>(t: u32) -> T {
    let two = T::one() + T::one();
    (0..t).fold(T::one(), |acc, _| acc / two.clone())
}

/// A point with exact coordinates. Serializes as a list of `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<T>(pub Vec<T>);

impl<T: Scalar> Point<T> {
    pub fn from_ints(xs: &[i64]) -> Self {
        Point(xs.iter().map(|&x| T::from_i64(x).expect("integer fits")).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    /// The point with `h` appended as a last coordinate.
    pub fn lifted(&self, h: T) -> Point<T> {
        let mut v = self.0.clone();
        v.push(h);
        Point(v)
    }

    pub fn midpoint(&self, other: &Point<T>) -> Point<T> {
        let two = T::one() + T::one();
        Point(self.0.iter().zip(&other.0).map(|(a, b)| (a.clone() + b.clone()) / two.clone()).collect())
    }
}

impl<T: Scalar> Serialize for Point<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Point<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<T>().map_err(|_| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<_, _>>()
            .map(Point)
    }
}

/// Serializes a scalar map as `{"key": "p/q"}`.
pub fn scalars_to_strings<K: Clone + Ord, T: Scalar>(m: &BTreeMap<K, T>) -> BTreeMap<K, String> {
    m.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

pub fn parse_scalar<T: Scalar>(s: &str) -> crate::error::Result<T> {
    s.trim().parse().map_err(|_| crate::error::Error::InputParseError(format!("bad rational {s:?}")))
}

/// OFF text for points and polytopal cells given by point indices.
/// Coordinates are decimal approximations; the exact values live in the
/// JSON sidecar.
pub fn to_off<T: Scalar>(points: &[Point<T>], cells: &[Vec<usize>]) -> String {
    let d = points.first().map_or(3, Point::dim);
    let mut out = String::new();
    if d == 3 {
        out.push_str("OFF\n");
    } else {
        let _ = writeln!(out, "nOFF\n{d}");
    }
    out.push_str("# coordinates are lossy decimal approximations of exact rationals\n");
    let _ = writeln!(out, "{} {} 0", points.len(), cells.len());
    for p in points {
        let line: Vec<String> = p.0.iter().map(|x| format!("{}", x.to_f64().unwrap_or(f64::NAN))).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    for c in cells {
        let idx: Vec<String> = c.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{} {}", c.len(), idx.join(" "));
    }
    out
}
